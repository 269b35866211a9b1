use serde_json::{json, Value};
use wigner_core::crystal::potential_at_strength;
use wigner_core::finite::{FiniteConfig, GridOverrides, Integrator, MonteCarloConfig, Strength};
use wigner_core::two_body::magic_g;
use wigner_core::{
    normal_modes, run_finite, scale_positions, solve_equilibrium, total_entropy, AsymptoticSolution, Error,
    SystemSpec,
};

use crate::output::{columns, num, Report};
use crate::{Cli, Command, EquilibriumArgs, FiniteArgs, IntegratorArg, MagicArgs, SweepArgs, SystemArgs};

/// Largest particle count for `sweep`.
pub const SWEEP_MAX_N: usize = 20;

pub enum Failure {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let report = match &cli.command {
        Command::Asymptotic(a) => asymptotic(a)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Finite(a) => finite(a)?,
        Command::MagicG(a) => magic(a)?,
        Command::Equilibrium(a) => equilibrium(a)?,
        Command::Modes(a) => modes(a)?,
    };
    let mut config = report.config.clone();
    if let Value::Object(map) = &mut config {
        map.insert("format".into(), json!(cli.format));
        map.insert("out".into(), json!(cli.out));
    }
    Report { config, ..report }.emit(cli.format, cli.out.as_deref()).map_err(Failure::Io)
}

fn with_subcommand(name: &str, args: &impl serde::Serialize) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    if let Value::Object(map) = &mut v {
        map.insert("subcommand".into(), json!(name));
    }
    v
}

fn system(args: &SystemArgs) -> Result<SystemSpec, Error> {
    SystemSpec::new(args.n, args.d)
}

fn asymptotic(args: &SystemArgs) -> Result<Report, Error> {
    let sol = AsymptoticSolution::compute(&system(args)?)?;
    let entropy = total_entropy(&sol.sites, args.n, args.d)?;
    let sites: Vec<Value> = sol
        .kernels
        .iter()
        .zip(&sol.sites)
        .map(|(k, s)| {
            json!({
                "site": s.site, "A": k.prefactor, "a": k.a, "b": k.b, "w": s.w, "y": s.y,
                "lambda0": s.lambda0, "occupancies": s.occupancies(),
            })
        })
        .collect();
    let rows = sol
        .kernels
        .iter()
        .zip(&sol.sites)
        .zip(&entropy.per_site)
        .zip(&sol.equilibrium.beta)
        .map(|(((k, s), e), beta)| {
            vec![
                s.site.to_string(),
                num(*beta),
                num(sol.modes.omega_sq[s.site - 1]),
                num(k.prefactor),
                num(k.a),
                num(k.b),
                num(s.w),
                num(s.y),
                num(s.lambda0),
                num(*e),
            ]
        })
        .collect();
    Ok(Report {
        config: with_subcommand("asymptotic", args),
        result: json!({
            "beta": sol.equilibrium.beta,
            "omega_sq": sol.modes.omega_sq,
            "sites": sites,
            "s_total_bits": entropy.s_total,
            "s_per_site": entropy.per_site,
            "linear_entropy": entropy.linear,
            "lambda0_sum": entropy.lambda0_sum,
        }),
        summary: [
            ("S_total_bits".to_owned(), num(entropy.s_total)),
            ("linear_entropy".to_owned(), num(entropy.linear)),
            ("lambda0_sum".to_owned(), num(entropy.lambda0_sum)),
        ]
        .into_iter()
        .chain(sol.sites.iter().map(|s| {
            let ladder: Vec<String> = s.occupancies().into_iter().map(num).collect();
            (format!("lambda site {}", s.site), ladder.join(" "))
        }))
        .collect(),
        header: columns(&["site", "beta", "omega_sq", "A", "a", "b", "w", "y", "lambda0", "S_site_bits"]),
        rows,
    })
}

fn sweep(args: &SweepArgs) -> Result<Report, Error> {
    if !(2..=SWEEP_MAX_N).contains(&args.n_max) {
        return Err(Error::InvalidArgument(format!("--n-max must lie in 2..={SWEEP_MAX_N}, got {}", args.n_max)));
    }
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for n in 2..=args.n_max {
        let sol = AsymptoticSolution::compute(&SystemSpec::new(n, args.d)?)?;
        let e = total_entropy(&sol.sites, n, args.d)?;
        rows.push(vec![n.to_string(), num(e.s_total), num(e.linear), num(e.lambda0_sum)]);
        points.push(json!({ "n": n, "s_total_bits": e.s_total, "linear_entropy": e.linear, "lambda0_sum": e.lambda0_sum }));
    }
    Ok(Report {
        config: with_subcommand("sweep", args),
        result: json!({ "d": args.d, "points": points }),
        summary: Vec::new(),
        header: columns(&["N", "S_total_bits", "L", "lambda0_sum"]),
        rows,
    })
}

fn finite(args: &FiniteArgs) -> Result<Report, Error> {
    let strength = match (args.g, args.magic_n) {
        (Some(g), None) => Strength::Value(g),
        (None, Some(k)) => Strength::Magic(k),
        _ => return Err(Error::InvalidArgument("give exactly one of --g and --magic-n".into())),
    };
    let mut cfg = FiniteConfig::new(args.n, strength);
    cfg.d = args.d;
    cfg.grid = GridOverrides { c: args.grid_c, k: args.grid_k, dy: Some(args.dy) };
    cfg.alpha = args.alpha;
    cfg.integrator = args.integrator.map(|i| match i {
        IntegratorArg::Quadrature => Integrator::Quadrature,
        IntegratorArg::MonteCarlo => Integrator::MonteCarlo,
    });
    cfg.monte_carlo = MonteCarloConfig { seed: args.seed, samples: args.samples, ..MonteCarloConfig::default() };
    let r = run_finite(&cfg)?;
    if r.alpha_boundary_warning {
        eprintln!("warning: optimal alpha {} lies at the search boundary; widen the interval", r.alpha);
    }
    if let Some(neg) = r.negative_eigenvalue {
        eprintln!("warning: Nyström eigenvalue {neg:e} below -1e-8; refine the grid");
    }
    let mut config = with_subcommand("finite", args);
    if let Value::Object(map) = &mut config {
        map.insert("effective".into(), serde_json::to_value(&cfg).expect("config serializes"));
    }
    let rows = r
        .occupancies
        .iter()
        .enumerate()
        .map(|(s, l)| {
            vec![
                r.n.to_string(),
                num(r.g),
                num(r.alpha),
                num(r.linear_entropy),
                num(r.entropy_bits),
                s.to_string(),
                num(*l),
            ]
        })
        .collect();
    Ok(Report {
        config,
        summary: vec![
            ("g".into(), num(r.g)),
            ("factor".into(), serde_json::to_value(r.factor).unwrap().as_str().unwrap_or_default().to_owned()),
            ("alpha".into(), num(r.alpha)),
            ("L".into(), num(r.linear_entropy)),
            ("S_bits".into(), num(r.entropy_bits)),
            ("trace_raw".into(), num(r.trace_raw)),
            ("grid".into(), format!("c = {}, K = {}, dy = {}", r.grid.c, r.grid.k, r.grid.dy)),
        ],
        result: serde_json::to_value(&r).expect("report serializes"),
        header: columns(&["N", "g", "alpha", "L", "S_bits", "s", "occupancy"]),
        rows,
    })
}

fn magic(args: &MagicArgs) -> Result<Report, Error> {
    if args.n == 0 {
        return Err(Error::InvalidArgument("--n must be at least 1".into()));
    }
    let s = magic_g(args.n)?;
    let rows = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| vec![s.n.to_string(), num(s.g_magic), num(s.e_rel), k.to_string(), num(*a)])
        .collect();
    Ok(Report {
        config: with_subcommand("magic-g", args),
        summary: vec![("g".into(), num(s.g_magic)), ("E_rel".into(), num(s.e_rel))],
        result: serde_json::to_value(&s).expect("series serializes"),
        header: columns(&["n", "g", "E_rel", "k", "a_k"]),
        rows,
    })
}

fn equilibrium(args: &EquilibriumArgs) -> Result<Report, Error> {
    let spec = system(&args.system)?;
    let cfg = solve_equilibrium(&spec)?;
    let positions = match args.g {
        Some(g) => Some(scale_positions(&cfg, spec.d, g)?),
        None => None,
    };
    let potential = match (args.g, &positions) {
        (Some(g), Some(x)) => potential_at_strength(spec.d, g, x)?,
        _ => potential_at_strength(spec.d, 1.0, &cfg.beta)?,
    };
    let rows = cfg
        .beta
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let x = positions.as_ref().map_or(*b, |p| p[i]);
            vec![(i + 1).to_string(), num(*b), num(x)]
        })
        .collect();
    Ok(Report {
        config: with_subcommand("equilibrium", args),
        summary: vec![
            ("potential".into(), num(potential)),
            ("gradient_norm".into(), num(cfg.gradient_norm)),
            ("iterations".into(), cfg.iterations.to_string()),
        ],
        result: json!({
            "beta": cfg.beta, "positions": positions, "potential": potential,
            "gradient_norm": cfg.gradient_norm, "iterations": cfg.iterations,
        }),
        header: columns(&["i", "beta", "x"]),
        rows,
    })
}

fn modes(args: &SystemArgs) -> Result<Report, Error> {
    let spec = system(args)?;
    let m = normal_modes(&solve_equilibrium(&spec)?, spec.d)?;
    let rows = (0..m.len())
        .map(|k| {
            let mut row = vec![k.to_string(), num(m.omega_sq[k]), serde_json::to_value(m.parity[k]).unwrap().as_str().unwrap().to_owned()];
            row.extend(m.u.row(k).iter().map(|v| num(*v)));
            row
        })
        .collect();
    let mut header = columns(&["mode", "omega_sq", "parity"]);
    header.extend((1..=m.len()).map(|i| format!("u_{i}")));
    Ok(Report {
        config: with_subcommand("modes", args),
        summary: Vec::new(),
        result: serde_json::to_value(&m).expect("modes serialize"),
        header,
        rows,
    })
}
