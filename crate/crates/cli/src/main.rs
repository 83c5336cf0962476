//! `qfree`: entanglement entropy of quasifree fermion chains.
//!
//! Exit codes: 1 I/O, 2 configuration or usage, 3 numerical failure,
//! 4 model outside the domain of the requested computation.

mod grammar;
mod output;
mod recipes;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quasifree::asymptotics::{find_symbol_zeros, general_gauge_asymptote, ising_dm_entropy};
use quasifree::config::load_model;
use quasifree::entropy::{entropy_scan, EntropyCurve, Method};
use quasifree::finite::{cc_fit, entropy_profile, profile_lengths, saturation_sweep, SaturationOptions};
use quasifree::fit::linear_fit;
use quasifree::oracle::{exact_block_entropy, wick_check};
use quasifree::sampling::random_tuple;
use quasifree::transforms::{
    decouple_direct, from_majorana, kw_selfdual_reduce, rotate_to_real_pairing, to_majorana, xy_ising_decouple,
    Rotation,
};
use quasifree::{classify, nn_phase_region, Boundary, Error, FiniteChain, ModelSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use output::{num, Report};
use grammar::NnParams;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Io(_) => 1,
            Self::Usage(_) => 2,
            Self::Lib(e) => match e {
                Error::Config { .. } | Error::InvalidModel(_) => 2,
                Error::Numerical(_)
                | Error::Quadrature { .. }
                | Error::DegenerateGroundState(_)
                | Error::FlatBand
                | Error::NoSaturation(_) => 3,
                _ => 4,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Lib(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qfree", version, about = "Entanglement entropy of quasifree fermion chains")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Args)]
struct Common {
    /// Model configuration file (TOML).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Nearest-neighbour model, e.g. `gamma=1,h=1,D=2`.
    #[arg(long, global = true)]
    nn: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Worker threads.
    #[arg(long, global = true, env = "QFREE_THREADS")]
    threads: Option<usize>,
    /// Seed for sampled index tuples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Bc {
    Open,
    Periodic,
}

impl From<Bc> for Boundary {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Open => Boundary::Open,
            Bc::Periodic => Boundary::Periodic,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Criticality, reflection breaking and dispersion zeros.
    Classify {
        #[arg(long, default_value_t = quasifree::phase::DEFAULT_GRID)]
        grid: usize,
    },
    /// Thermodynamic-limit S_L over a range of block lengths.
    Scan {
        /// `a:b`, `a:b:step` or a comma list.
        #[arg(long = "L", default_value = "1:64")]
        l: String,
    },
    /// Fisher-Hartwig slope and constant, optionally evaluated at block lengths.
    Asymptote {
        #[arg(long = "L")]
        l: Option<String>,
    },
    /// Model transforms.
    Transform {
        #[command(subcommand)]
        kind: TransformKind,
    },
    /// Finite open or fermionic-periodic chains.
    Finite {
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "open")]
        bc: Bc,
        /// Emit S(L, N) and Delta S for all block lengths.
        #[arg(long)]
        profile: bool,
        /// Chord-length fit over `L/N` in `a,b`.
        #[arg(long)]
        fit_window: Option<String>,
        /// Repeat over chain lengths, e.g. `N=256,512`.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = 200)]
        max_points: usize,
    },
    /// Saturation entropy and correlation length along a parameter path.
    Sweep {
        /// Nearest-neighbour parameter and values, e.g. `h=0.9,0.95`.
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = 10)]
        step: usize,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        #[arg(long, default_value_t = 4000)]
        max_l: usize,
    },
    /// Exact diagonalization against the correlation method.
    Oracle {
        #[arg(long = "N", default_value_t = 8)]
        n: usize,
        #[arg(long, value_enum, default_value = "open")]
        bc: Bc,
        /// Number of random 4-point tuples for the Wick check.
        #[arg(long, default_value_t = 20)]
        wick: usize,
    },
    /// Reproduction recipes.
    Repro(recipes::RecipeArgs),
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum TransformKind {
    /// Kramers-Wannier reduction of a selfdual chain.
    Kw,
    /// Split a model with purely imaginary A and B.
    Decouple,
    /// Split an XY-type coupling into two Ising-type chains.
    XyIsing,
    /// Rotate to real pairing.
    Rotate,
}

enum Source {
    Nn(NnParams),
    File,
}

fn load(common: &Common) -> Result<(ModelSpec, Source), CliError> {
    match (&common.model, &common.nn) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --model or --nn, not both".into())),
        (Some(p), None) => Ok((load_model(p)?, Source::File)),
        (None, Some(s)) => {
            let p = grammar::nn(s).map_err(CliError::Usage)?;
            Ok((p.model()?, Source::Nn(p)))
        }
        (None, None) => Err(CliError::Usage("a model is required (--model or --nn)".into())),
    }
}

fn curve_rows(rep: &mut Report, curve: &EntropyCurve) {
    rep.line("L,S_L,method,model-hash");
    for (l, s) in &curve.points {
        rep.row(&[l.to_string(), num(*s), curve.method.tag().into(), curve.model_hash.clone()]);
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let c = &cli.common;
    let tol = c.tol;
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(CliError::Usage(format!("--tol {tol:e} outside (0, 1e-6]")));
    }
    match &cli.verb {
        Verb::Repro(args) => recipes::run(args, tol),
        Verb::Classify { grid } => {
            let (model, src) = load(c)?;
            let p = classify(&model, *grid)?;
            let mut rep = Report::new("classify", Some(&model), tol, &[("grid", grid.to_string())]);
            rep.line(format!("critical={}", p.critical));
            rep.line(format!("reflection_breaking={}", p.reflection_breaking));
            rep.line(format!("flat_band={}", p.flat_band));
            let zs: Vec<String> = p.dispersion_zeros.iter().map(|z| num(*z)).collect();
            rep.line(format!("dispersion_zeros={}", zs.join(";")));
            let neg: Vec<String> = p.negative_region.iter().map(|(a, b)| format!("{}:{}", num(*a), num(*b))).collect();
            rep.line(format!("negative_region={}", neg.join(";")));
            if let Source::Nn(q) = src {
                let (_, region) = nn_phase_region(q.gamma, q.h, q.d)?;
                rep.line(format!("nn_region={region:?}"));
            }
            Ok(rep)
        }
        Verb::Scan { l } => {
            let (model, _) = load(c)?;
            let ls = grammar::lengths(l).map_err(CliError::Usage)?;
            let curve = entropy_scan(&model, &ls, tol)?;
            let mut rep = Report::new("scan", Some(&model), tol, &[]);
            curve_rows(&mut rep, &curve);
            Ok(rep)
        }
        Verb::Asymptote { l } => {
            let (model, src) = load(c)?;
            let ising_dm = match src {
                Source::Nn(q) if q.gamma == 1.0 && q.h == 1.0 => Some(q.d),
                _ => None,
            };
            let a = if let Some(d) = ising_dm {
                ising_dm_entropy(d)
            } else if model.is_gauge_invariant() {
                general_gauge_asymptote(&find_symbol_zeros(&model)?)?
            } else {
                let red = kw_selfdual_reduce(&model)?;
                let g = general_gauge_asymptote(&find_symbol_zeros(&red.reduced)?)?;
                quasifree::AsymptoteResult {
                    slope: 0.5 * g.slope,
                    constant: 0.5 * (g.constant + g.slope * 2f64.ln()),
                    residue: g.residue,
                }
            };
            let mut rep = Report::new("asymptote", Some(&model), tol, &[("slope", num(a.slope)), ("constant", num(a.constant))]);
            if let Some(l) = l {
                let ls = grammar::lengths(l).map_err(CliError::Usage)?;
                let curve = EntropyCurve {
                    points: ls.iter().map(|&l| (l, a.predict(l as f64))).collect(),
                    method: Method::Asymptotic,
                    model_hash: model.hash(),
                };
                curve_rows(&mut rep, &curve);
            } else {
                rep.line("slope,constant");
                rep.row(&[num(a.slope), num(a.constant)]);
            }
            Ok(rep)
        }
        Verb::Transform { kind } => {
            let (model, _) = load(c)?;
            let mut rep;
            match kind {
                TransformKind::Kw => {
                    let red = kw_selfdual_reduce(&model)?;
                    rep = Report::new("transform kw", Some(&model), tol, &[("rule", "S_L = S_2L(reduced) / 2".into())]);
                    rep.line(red.reduced.canonical().trim_end());
                }
                TransformKind::Decouple => {
                    let d = decouple_direct(&model)?;
                    rep = Report::new(
                        "transform decouple",
                        Some(&model),
                        tol,
                        &[("rule", "S_L = S_L(plus) / 2 + S_L(minus) / 2 over gauge kernels".into())],
                    );
                    rep.line("# chain: plus");
                    rep.line(d.plus.canonical().trim_end());
                    rep.line("# chain: minus");
                    rep.line(d.minus.canonical().trim_end());
                }
                TransformKind::XyIsing => {
                    let (t1, t2) = xy_ising_decouple(&to_majorana(&model))?;
                    rep = Report::new("transform xy-ising", Some(&model), tol, &[("rule", "S_2L = S_L(first) + S_L(second)".into())]);
                    rep.line("# chain: first");
                    rep.line(from_majorana(&t1)?.canonical().trim_end());
                    rep.line("# chain: second");
                    rep.line(from_majorana(&t2)?.canonical().trim_end());
                }
                TransformKind::Rotate => match rotate_to_real_pairing(&model) {
                    Rotation::Rotated { model: rotated, axis } => {
                        let axis = format!("{},{},{}", num(axis[0]), num(axis[1]), num(axis[2]));
                        rep = Report::new("transform rotate", Some(&model), tol, &[("axis", axis)]);
                        rep.line(rotated.canonical().trim_end());
                    }
                    Rotation::NotReducible(why) => return Err(Error::NotReducible(why).into()),
                },
            }
            Ok(rep)
        }
        Verb::Finite { n, bc, profile, fit_window, sweep, max_points } => {
            let (model, _) = load(c)?;
            let ns = match (n, sweep) {
                (_, Some(s)) => {
                    let (name, vals) = grammar::param_list(s).map_err(CliError::Usage)?;
                    if name != "N" || vals.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
                        return Err(CliError::Usage(format!("--sweep expects N=n1,n2,..., got `{s}`")));
                    }
                    vals.iter().map(|v| *v as usize).collect()
                }
                (Some(n), None) => vec![*n],
                (None, None) => return Err(CliError::Usage("--N or --sweep is required".into())),
            };
            let window = match fit_window {
                Some(w) => match grammar::floats(w).map_err(CliError::Usage)?.as_slice() {
                    [a, b] if 0.0 <= *a && a < b && *b <= 1.0 => Some((*a, *b)),
                    _ => return Err(CliError::Usage(format!("--fit-window expects a,b in [0, 1], got `{w}`"))),
                },
                None => None,
            };
            let boundary: Boundary = (*bc).into();
            let mut rep = Report::new("finite", Some(&model), tol, &[("boundary", format!("{bc:?}").to_lowercase())]);
            let show_profile = *profile || (window.is_none() && sweep.is_none());
            if show_profile {
                rep.line("L,S_L,method,model-hash,N,delta_S");
            } else {
                rep.line("N,max_abs_delta_S,c_fit,s0,rms,points");
            }
            for n in ns {
                let state = FiniteChain::new(&model, n, boundary)?.ground_state()?;
                let ls = profile_lengths(n, *max_points);
                let rows = entropy_profile(&state, n, &ls)?;
                if show_profile {
                    for r in &rows {
                        rep.row(&[
                            r.l.to_string(),
                            num(r.s),
                            Method::ExactFinite.tag().into(),
                            model.hash(),
                            n.to_string(),
                            num(r.delta_s),
                        ]);
                    }
                    if let Some(w) = window {
                        let f = cc_fit(&rows, w)?;
                        rep.line(format!("# N={n} c_fit={} s0={} rms={}", num(f.c), num(f.s0), num(f.rms)));
                    }
                } else {
                    let m = rows.iter().fold(0.0f64, |m, r| m.max(r.delta_s.abs()));
                    let (fc, fs, fr, fp) = match window {
                        Some(w) => {
                            let f = cc_fit(&rows, w)?;
                            (num(f.c), num(f.s0), num(f.rms), f.points.to_string())
                        }
                        None => (String::new(), String::new(), String::new(), String::new()),
                    };
                    rep.row(&[n.to_string(), num(m), fc, fs, fr, fp]);
                }
            }
            Ok(rep)
        }
        Verb::Sweep { param, step, threshold, max_l } => {
            let (_, src) = load(c)?;
            let Source::Nn(base) = src else {
                return Err(CliError::Usage("sweep needs a nearest-neighbour family (--nn)".into()));
            };
            let (name, vals) = grammar::param_list(param).map_err(CliError::Usage)?;
            base.with(&name, 0.0).map_err(CliError::Usage)?;
            if *step == 0 {
                return Err(CliError::Usage("--step must be positive".into()));
            }
            let opts = SaturationOptions { step: *step, threshold: *threshold, max_l: *max_l, tol };
            let rows = saturation_sweep(|v| base.with(&name, v).expect("checked").model(), &vals, opts)?;
            let mut rep = Report::new(
                "sweep",
                None,
                tol,
                &[
                    ("family", format!("gamma={},h={},D={}", base.gamma, base.h, base.d)),
                    ("param", name.clone()),
                    ("step", step.to_string()),
                    ("threshold", format!("{threshold:e}")),
                ],
            );
            if rows.len() >= 2 {
                let x: Vec<f64> = rows.iter().map(|r| r.xi.ln()).collect();
                let y: Vec<f64> = rows.iter().map(|r| r.s_sat).collect();
                rep.line(format!("# c_est = {}", num(3.0 * linear_fit(&x, &y)?.slope)));
            }
            rep.line(format!("{name},xi,S_sat,L_sat"));
            for r in rows {
                rep.row(&[num(r.param), num(r.xi), num(r.s_sat), r.l_sat.to_string()]);
            }
            Ok(rep)
        }
        Verb::Oracle { n, bc, wick } => {
            let (model, _) = load(c)?;
            let boundary: Boundary = (*bc).into();
            let state = FiniteChain::new(&model, *n, boundary)?.ground_state()?;
            let mut rep = Report::new("oracle", Some(&model), tol, &[("N", n.to_string()), ("seed", c.seed.to_string())]);
            if *n <= 10 && *wick > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                let tuples: Vec<Vec<usize>> = (0..*wick).map(|_| random_tuple(&mut rng, *n, 4)).collect();
                rep.line(format!("# wick_deviation = {}", num(wick_check(&model, *n, boundary, &tuples)?)));
            }
            rep.line("L,S_exact,S_correlation,abs_diff");
            for l in 1..*n {
                let exact = exact_block_entropy(&model, *n, l, boundary)?;
                let corr = state.block_entropy(0, l)?;
                rep.row(&[l.to_string(), num(exact), num(corr), num((exact - corr).abs())]);
            }
            Ok(rep)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("qfree: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|rep| rep.emit(cli.common.out.as_deref()).map_err(CliError::Io));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qfree: {e}");
            ExitCode::from(e.code())
        }
    }
}
