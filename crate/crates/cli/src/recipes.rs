//! Named reproduction recipes.

use clap::{Args, ValueEnum};
use quasifree::asymptotics::{c_is, c_isdm, ising_dm_entropy};
use quasifree::entropy::{entropy_scan, saturated_entropy};
use quasifree::finite::{cc_fit, entropy_profile, profile_lengths, saturation_sweep, SaturationOptions};
use quasifree::fit::linear_fit;
use quasifree::{Boundary, Complex64, FiniteChain, ModelSpec, ProfileRow};
use rayon::prelude::*;

use crate::output::{num, Report};
use crate::grammar;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    /// Fitted `S_L = a ln L + b` on the critical Ising-DM line against the closed forms.
    IsingDmConstants,
    /// Largest reflection asymmetry of the next-nearest-neighbour chain at growing N.
    DeltaSDecay,
    /// Central charge from the open-chain chord-length fit.
    CcFit,
    /// Saturation entropy: D independence and the c = 1/2 slope near h = 1.
    SaturationAnomaly,
}

#[derive(Debug, Args)]
pub struct RecipeArgs {
    pub recipe: Recipe,
    /// Chain lengths for the finite-size recipes.
    #[arg(long)]
    pub ns: Option<String>,
    /// DM couplings for `ising-dm-constants`.
    #[arg(long)]
    pub ds: Option<String>,
    /// Field values approaching 1 for `saturation-anomaly`.
    #[arg(long)]
    pub hs: Option<String>,
    /// Profile points per chain.
    #[arg(long, default_value_t = 120)]
    pub max_points: usize,
}

/// The next-nearest-neighbour chain with complex couplings.
pub fn nnn_model() -> ModelSpec {
    let c = Complex64::new;
    ModelSpec::new(3, vec![c(12.0, 0.0), c(7.0, 28.0), c(4.0, 5.0)], vec![c(-11.0, 10.0), c(-3.0, 4.0)])
        .expect("valid model")
}

fn profile(model: &ModelSpec, n: usize, max_points: usize) -> Result<Vec<ProfileRow>, CliError> {
    let state = FiniteChain::new(model, n, Boundary::Open)?.ground_state()?;
    let ls: Vec<usize> = profile_lengths(n, max_points)
        .into_iter()
        .filter(|&l| l as f64 >= 0.04 * n as f64 && l as f64 <= 0.96 * n as f64)
        .collect();
    Ok(entropy_profile(&state, n, &ls)?)
}

pub fn run(args: &RecipeArgs, tol: f64) -> Result<Report, CliError> {
    let ns = |default: &str| grammar::lengths(args.ns.as_deref().unwrap_or(default)).map_err(CliError::Usage);
    let name = args.recipe.to_possible_value().unwrap().get_name().to_string();
    match args.recipe {
        Recipe::IsingDmConstants => {
            let ds = grammar::floats(args.ds.as_deref().unwrap_or("0,2")).map_err(CliError::Usage)?;
            let mut rep = Report::new(
                &format!("repro {name}"),
                None,
                tol,
                &[("C_Is", num(c_is())), ("C_IsDM", num(c_isdm())), ("fit-lengths", "64:512:32".into())],
            );
            rep.line("D,slope_fit,constant_fit,slope_formula,constant_formula");
            let ls: Vec<usize> = (64..=512).step_by(32).collect();
            let rows = ds
                .par_iter()
                .map(|&d| {
                    let curve = entropy_scan(&ModelSpec::nearest_neighbor(1.0, 1.0, d)?, &ls, tol)?;
                    let x: Vec<f64> = curve.points.iter().map(|p| (p.0 as f64).ln()).collect();
                    let y: Vec<f64> = curve.points.iter().map(|p| p.1).collect();
                    Ok((d, linear_fit(&x, &y)?))
                })
                .collect::<quasifree::Result<Vec<_>>>()?;
            for (d, f) in rows {
                let a = ising_dm_entropy(d);
                rep.row(&[num(d), num(f.slope), num(f.intercept), num(a.slope), num(a.constant)]);
            }
            Ok(rep)
        }
        Recipe::DeltaSDecay | Recipe::CcFit => {
            let default = if args.recipe == Recipe::DeltaSDecay { "256,512" } else { "256,1024" };
            let ns = ns(default)?;
            let model = nnn_model();
            let mut rep = Report::new(
                &format!("repro {name}"),
                Some(&model),
                tol,
                &[("boundary", "open".into()), ("window", "0.04,0.96".into())],
            );
            rep.line(if args.recipe == Recipe::DeltaSDecay {
                "N,max_abs_delta_S"
            } else {
                "N,c_fit,s0,rms,points"
            });
            for n in ns {
                let rows = profile(&model, n, args.max_points)?;
                if args.recipe == Recipe::DeltaSDecay {
                    let m = rows.iter().fold(0.0f64, |m, r| m.max(r.delta_s.abs()));
                    rep.row(&[n.to_string(), num(m)]);
                } else {
                    let f = cc_fit(&rows, (0.04, 0.96))?;
                    rep.row(&[n.to_string(), num(f.c), num(f.s0), num(f.rms), f.points.to_string()]);
                }
            }
            Ok(rep)
        }
        Recipe::SaturationAnomaly => {
            let hs = grammar::floats(args.hs.as_deref().unwrap_or("0.98,0.985,0.99,0.995")).map_err(CliError::Usage)?;
            let opts = SaturationOptions { tol, ..SaturationOptions::default() };
            let mut rep = Report::new(
                &format!("repro {name}"),
                None,
                tol,
                &[("step", opts.step.to_string()), ("threshold", format!("{:e}", opts.threshold))],
            );
            let (s0, s5) = rayon::join(
                || saturated_entropy(&ModelSpec::nearest_neighbor(1.0, 0.9, 0.0)?, opts),
                || saturated_entropy(&ModelSpec::nearest_neighbor(1.0, 0.9, 0.5)?, opts),
            );
            let (s0, s5) = (s0?.0, s5?.0);
            rep.line(format!("# S_sat(h=0.9, D=0) = {}", num(s0)));
            rep.line(format!("# S_sat(h=0.9, D=0.5) = {}", num(s5)));
            rep.line(format!("# difference = {}", num((s0 - s5).abs())));
            let rows = saturation_sweep(|h| ModelSpec::nearest_neighbor(1.0, h, 0.0), &hs, opts)?;
            if rows.len() >= 2 {
                let x: Vec<f64> = rows.iter().map(|r| r.xi.ln()).collect();
                let y: Vec<f64> = rows.iter().map(|r| r.s_sat).collect();
                rep.line(format!("# c_est = {}", num(3.0 * linear_fit(&x, &y)?.slope)));
            }
            rep.line("h,xi,S_sat,L_sat");
            for r in rows {
                rep.row(&[num(r.param), num(r.xi), num(r.s_sat), r.l_sat.to_string()]);
            }
            Ok(rep)
        }
    }
}
