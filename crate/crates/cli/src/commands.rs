//! The individual commands. Each returns the `outputs` block of a report.

use cso_core::cso::{
    contraction_report, fixed_point_independence, pinned, poly_fixed_points, poly_fp_degrees, polynomial_image,
    simplicity_check, SimplicityViolation, KERNEL_THRESHOLD,
};
use cso_core::fixpoint::{
    generalized_seed_fixed_point, FixedPointProblem, FixedPointResult, RouteRegistry, SeedSpec, DEFAULT_K_MAX,
};
use cso_core::golden::{
    default_figure_grid, figure_data, identity_partial_products, make_m, sfs_spectrum, GoldenConstants, Which,
    WordExpansion,
};
use cso_core::numeric::{branch_distance, c, ONE, ZERO};
use cso_core::{AffineCso, Complex, SingularFunction, SingularKind, SingularTerm};
use serde_json::{json, Value};

use crate::args::{FixpointArgs, GoldenCommand, PolyfixArgs, SeedKind};
use crate::config::OperatorConfig;
use crate::CliError;

fn cx(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

fn operator_json(op: &AffineCso) -> Value {
    op.terms()
        .iter()
        .map(|t| json!({ "a": cx(t.coeff), "s": cx(t.map.rate()), "fix": cx(t.map.fixed_point()) }))
        .collect()
}

fn function_json(f: &SingularFunction) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|t| match t.kind {
            SingularKind::Log => json!({ "kind": "log", "location": cx(t.location), "weight": cx(t.weight) }),
            SingularKind::Pole(k) => {
                json!({ "kind": "pole", "order": k, "location": cx(t.location), "weight": cx(t.weight) })
            }
        })
        .collect();
    let g = f.regular();
    json!({
        "radius": f.radius(),
        "terms": terms,
        "regular": {
            "coeffs": g.coeffs().iter().map(|&z| cx(z)).collect::<Vec<_>>(),
            "tail_bound": g.tail_bound(),
            "l1_norm": g.l1_norm(),
        },
    })
}

pub fn run_diagnose(config: &OperatorConfig, radius: f64, pin: Option<Complex>) -> Result<Value, CliError> {
    let base = config.operator()?;
    let op = match pin {
        Some(p) => pinned(&base, p)?,
        None => base,
    };
    let report = contraction_report(&op, config.mu, radius, config.truncation)?;
    let degree_limit = 50;
    let degree_tol = 1e-12;
    let degrees = poly_fp_degrees(&op, degree_limit, degree_tol);

    let independence: Vec<Value> = (0..op.len())
        .filter(|&i| !op.terms()[i].map.is_constant())
        .map(|i| {
            let z = op.terms()[i].map.fixed_point();
            Ok(json!({ "index": i, "fixed_point": cx(z), "independent": fixed_point_independence(&op, i, radius)? }))
        })
        .collect::<Result<_, CliError>>()?;

    let set: Vec<Complex> = op.terms().iter().filter(|t| !t.map.is_constant()).map(|t| t.map.fixed_point()).collect();
    let simplicity: Vec<Value> = simplicity_check(&op, &set)
        .into_iter()
        .map(|v| {
            let violations: Vec<String> = v
                .violations
                .iter()
                .map(|x| match x {
                    SimplicityViolation::NotFixed => "not fixed by any map".to_string(),
                    SimplicityViolation::FixedByMany(maps) => format!("fixed by maps {maps:?}"),
                    SimplicityViolation::MapsIntoSet { map, image } => {
                        format!("map {map} sends it to {image}, which is in the set")
                    }
                })
                .collect();
            json!({ "point": cx(v.point), "fixed_by": v.fixed_by, "simple": v.is_simple(), "violations": violations })
        })
        .collect();

    Ok(json!({
        "operator": operator_json(&op),
        "pinned_at": pin.map(cx),
        "radius": radius,
        "contraction": {
            "mu": report.mu,
            "r0": report.r0,
            "cutoff": report.cutoff,
            "n_max": config.truncation,
            "ratios": report.ratios,
            "max_ratio_n_ge_1": report.ratios.iter().skip(1).copied().fold(0.0, f64::max),
            "tail_ratio_bound": report.tail_ratio_bound,
            "rate": report.rate,
            "is_contraction": report.is_contraction,
        },
        "polynomial_fixed_point_degrees": {
            "degrees": degrees.degrees,
            "searched_up_to": degree_limit,
            "relation_tolerance": degree_tol,
            "none_beyond": degrees.cutoff,
        },
        "independence": independence,
        "simplicity": simplicity,
    }))
}

fn result_json(result: &FixedPointResult, tol: f64) -> Value {
    json!({
        "route": format!("{:?}", result.route),
        "tolerance": tol,
        "residual_norm": result.residual_norm,
        "parent_residual_norm": result.parent_residual_norm,
        "iterations": result.iterations,
        "contraction_rate": result.rate,
        "fixed_point": function_json(&result.fixed_point),
    })
}

pub fn run_fixpoint(config: &OperatorConfig, radius: f64, args: &FixpointArgs) -> Result<Value, CliError> {
    let op = config.operator()?;
    let registry = RouteRegistry::with_builtin();
    let route = registry.get(&args.route).ok_or_else(|| {
        CliError::Usage(format!("unknown route {:?}; available: {}", args.route, registry.names().join(", ")))
    })?;
    let seed = match args.seed {
        SeedKind::Log => SingularTerm::log(args.at, args.weight)?,
        SeedKind::Pole => SingularTerm::pole(args.at, args.pole_order, args.weight)?,
    };
    let mut problem = FixedPointProblem::new(op, seed, radius, args.tol);
    problem.order = args.order;
    problem.pin = args.pin;
    let result = route.construct(&problem)?;
    if let Some(parent) = result.parent_residual_norm {
        if parent > args.tol {
            return Err(cso_core::Error::ResidualTooLarge { residual: parent, tol: args.tol }.into());
        }
    }
    let mut out = result_json(&result, args.tol);
    out["route_name"] = json!(route.name());
    out["operator"] = operator_json(&problem.operator);
    Ok(out)
}

/// Sample points for the oracle comparison: away from the logarithmic
/// singularities at 0 and 1 and inside `|z| ≤ 0.9`.
fn comparison_points() -> Vec<Complex> {
    let ring = |r: f64, count: usize, shift: f64| {
        (0..count).map(move |k| Complex::from_polar(r, std::f64::consts::TAU * (k as f64 + shift) / count as f64))
    };
    ring(0.5, 12, 0.0).chain(ring(0.8, 8, 0.5)).collect()
}

fn golden_fp(depth: usize, radius: f64, tol: f64) -> Result<Value, CliError> {
    let g = GoldenConstants::new();
    let m = make_m();
    let oracle = WordExpansion::new(depth);
    let points = comparison_points();
    // One word sweep per point serves both functions.
    let sweeps: Vec<[Complex; 2]> = points
        .iter()
        .map(|&z| {
            let (f1, f2) = oracle.eval_both(z)?;
            Ok([f1.expect("sample points avoid 0"), f2.expect("sample points avoid 1")])
        })
        .collect::<Result<_, CliError>>()?;
    let mut functions = Vec::new();
    for (slot, (which, location, pin)) in [(Which::F1, ZERO, g.c1), (Which::F2, ONE, g.c2)].into_iter().enumerate() {
        let mc = pinned(&m, c(pin, 0.0))?;
        let seed = SeedSpec::new(&mc, SingularTerm::log(location, ONE)?)?;
        let result = generalized_seed_fixed_point(&mc, &seed, radius, tol, DEFAULT_K_MAX)?;
        let f = &result.fixed_point;
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for (&z, sweep) in points.iter().zip(&sweeps) {
            let engine = f.eval(z)?;
            let words = sweep[slot];
            let diff = branch_distance(engine, words);
            worst = worst.max(diff);
            rows.push(json!({ "z": cx(z), "engine": cx(engine), "word_expansion": cx(words), "difference": diff }));
        }
        let p = c(pin, 0.0);
        functions.push(json!({
            "function": format!("{which:?}"),
            "seed": { "kind": "log", "location": cx(location) },
            "pinned_at": pin,
            "route": format!("{:?}", result.route),
            "tolerance": tol,
            "residual_norm": result.residual_norm,
            "iterations": result.iterations,
            "engine_at_pin": branch_distance(f.eval(p)?, ZERO),
            "word_expansion_at_pin": branch_distance(oracle.eval(which, p)?, ZERO),
            "max_difference": worst,
            "comparison": rows,
        }));
    }
    Ok(json!({ "depth": depth, "radius": radius, "functions": functions }))
}

fn golden_identity(depth: usize) -> Value {
    let target = 1.0 + GoldenConstants::new().omega;
    let rows: Vec<Value> = identity_partial_products(depth)
        .into_iter()
        .enumerate()
        .map(|(d, p)| json!({ "depth": d, "product": p, "error": (p - target).abs() }))
        .collect();
    json!({ "target": target, "partial_products": rows })
}

pub const FIGURE_HEADER: &str = "x,re_exp_f1,re_exp_f2,ratio_dev";

fn golden_figure(depth: usize, parallel: bool) -> Result<(Value, String), CliError> {
    let table = figure_data(&default_figure_grid(), depth, parallel)?;
    let mut csv = String::with_capacity(64 * table.rows.len());
    csv.push_str(FIGURE_HEADER);
    csv.push('\n');
    for r in &table.rows {
        // Debug formatting is the shortest round-trip form, with exponents for
        // very small or large values.
        csv.push_str(&format!("{:?},{:?},{:?},{:?}\n", r.x, r.re_exp_f1, r.re_exp_f2, r.ratio_dev));
    }
    let summary = json!({
        "depth": depth,
        "rows": table.rows.len(),
        "normalization": table.normalization,
        "max_ratio_dev": table.max_ratio_dev,
        "parallel": parallel,
    });
    Ok((summary, csv))
}

fn golden_sfs(n: usize) -> Result<Value, CliError> {
    let sp = sfs_spectrum(n)?;
    let matrix: Vec<Vec<String>> = sp.matrix.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect();
    Ok(json!({
        "n": n,
        "dimension": sp.dimension(),
        "matrix": matrix,
        "diagonal": sp.diagonal.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "numeric_eigenvalues": sp.summary().numeric,
    }))
}

/// Returns the report outputs and, for the figure, the CSV text.
pub fn run_golden(cmd: &GoldenCommand) -> Result<(Value, Option<String>), CliError> {
    Ok(match cmd {
        GoldenCommand::Fp(a) => (golden_fp(a.depth, a.radius, a.tol)?, None),
        GoldenCommand::Identity(a) => (golden_identity(a.depth), None),
        GoldenCommand::Figure(a) => {
            let (v, csv) = golden_figure(a.depth, a.parallel)?;
            (v, Some(csv))
        }
        GoldenCommand::Sfs(a) => (golden_sfs(a.n)?, None),
    })
}

pub fn run_polyfix(config: &OperatorConfig, args: &PolyfixArgs) -> Result<Value, CliError> {
    let op = config.operator()?;
    let degrees = poly_fp_degrees(&op, args.max_degree, args.tol);
    let basis: Vec<Value> = match degrees.degrees.last() {
        Some(&m) => poly_fixed_points(&op, m)
            .into_iter()
            .map(|p| {
                let image = polynomial_image(&op, &p);
                let residual: f64 = image.iter().zip(&p).map(|(a, b)| (a - b).norm()).sum();
                json!({ "coeffs": p.iter().map(|&z| cx(z)).collect::<Vec<_>>(), "residual": residual })
            })
            .collect(),
        None => Vec::new(),
    };
    Ok(json!({
        "operator": operator_json(&op),
        "degrees": degrees.degrees,
        "searched_up_to": args.max_degree,
        "relation_tolerance": args.tol,
        "kernel_threshold": KERNEL_THRESHOLD,
        "basis": basis,
    }))
}
