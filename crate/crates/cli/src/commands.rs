use std::io::Write;

use thorinkit::classes::{
    build_approximation, counterexample_transform, lomax_cdf, lomax_cdf_quadrature, pick_grid, sup_h_k_at,
    GeneralizedBernsteinFn, Representation, StieltjesFn, ThorinBernsteinFn,
};
use thorinkit::numerics::log_space;
use thorinkit::specfun::{exp_integral_e, hyp2f1, inc_beta, lower_inc_gamma, upper_inc_gamma};
use thorinkit::verify::{
    find_case, run_all, run_identity, write_csv, write_json, GridOverride, RunOptions, Summary, VerificationReport,
};

use crate::args::{ApproxArgs, EvalArgs, FnName, Format, OutputArgs, Params, ReportArgs, ReprChoice, Series, VerifyArgs};
use crate::error::CliError;
use crate::table::{Cell, Table};

const DEFAULT_APPROX_N: [u32; 5] = [1, 2, 4, 8, 16];
const DEFAULT_APPROX_X: [f64; 3] = [0.5, 1.0, 3.0];

/// Writes to --out, or to standard output.
fn emit(output: &OutputArgs, default: Format, write: impl FnOnce(Format, &mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    let format = output.format.unwrap_or(default);
    let mut buf = Vec::new();
    write(format, &mut buf)?;
    match &output.out {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

fn default_grid(params: &Params) -> Vec<f64> {
    if params.x.is_empty() {
        log_space(0.01, 100.0, 41)
    } else {
        params.x.clone()
    }
}

pub fn eval(args: &EvalArgs) -> Result<(), CliError> {
    let p = args.params.resolve(&[])?;
    let name = args.function.to_possible_value_name();
    let xs = p.xs(&name)?;
    let table = match args.function {
        FnName::IncGammaLower | FnName::IncGammaUpper => {
            let a = p.require(p.a, "a", &name)?;
            let upper = args.function == FnName::IncGammaUpper;
            scalar_table(&xs, |x| Ok(if upper { upper_inc_gamma(a, x)? } else { lower_inc_gamma(a, x)? }))?
        }
        FnName::IncBeta => {
            let (a, b) = (p.require(p.a, "a", &name)?, p.require(p.b, "b", &name)?);
            scalar_table(&xs, |x| Ok(inc_beta(a, b, x)?))?
        }
        FnName::Hyp2f1 => {
            let (a, b, c) = (p.require(p.a, "a", &name)?, p.require(p.b, "b", &name)?, p.require(p.c, "c", &name)?);
            scalar_table(&xs, |x| Ok(hyp2f1(a, b, c, x)?))?
        }
        FnName::ExpInt => {
            let order = p.require(p.p, "p", &name)?;
            scalar_table(&xs, |x| Ok(exp_integral_e(order, x)?))?
        }
        FnName::Thorin => {
            let f = ThorinBernsteinFn::new(
                p.require(p.lambda, "lambda", &name)?,
                p.require(p.alpha, "alpha", &name)?,
                p.a.unwrap_or(0.0),
                p.b.unwrap_or(0.0),
                p.measure(&name)?,
            )?;
            let reprs: Vec<Representation> = match args.repr {
                ReprChoice::All => Representation::ALL.to_vec(),
                ReprChoice::Defining => vec![Representation::Defining],
                ReprChoice::BetaForm => vec![Representation::BetaForm],
                ReprChoice::HyperForm => vec![Representation::HyperForm],
            };
            let mut t = Table::new(std::iter::once("x").chain(reprs.iter().map(|r| r.name())));
            for &x in &xs {
                let mut row = vec![Cell::Num(x)];
                for &r in &reprs {
                    row.push(Cell::Num(f.eval_with(x, r)?));
                }
                t.push(row);
            }
            t
        }
        FnName::Stieltjes => {
            let g = StieltjesFn::new(p.require(p.lambda, "lambda", &name)?, p.measure(&name)?, p.c.unwrap_or(0.0))?;
            scalar_table(&xs, |x| Ok(g.eval(x)?))?
        }
        FnName::Bernstein => {
            let f = GeneralizedBernsteinFn::new(
                p.require(p.lambda, "lambda", &name)?,
                p.a.unwrap_or(0.0),
                p.b.unwrap_or(0.0),
                p.measure(&name)?,
            )?;
            scalar_table(&xs, |x| Ok(f.eval(x)?))?
        }
        FnName::Lomax => {
            let l = p.require(p.lambda, "lambda", &name)?;
            lomax_table(l, &xs)?
        }
    };
    emit(&args.output, Format::Csv, |f, w| table.write(f, w))
}

fn scalar_table(xs: &[f64], f: impl Fn(f64) -> Result<f64, CliError>) -> Result<Table, CliError> {
    let mut t = Table::new(["x", "value"]);
    for &x in xs {
        t.push(vec![Cell::Num(x), Cell::Num(f(x)?)]);
    }
    Ok(t)
}

fn lomax_table(lambda: f64, xs: &[f64]) -> Result<Table, CliError> {
    let mut t = Table::new(["x", "closed_form", "quadrature"]);
    for &x in xs {
        t.push(vec![Cell::Num(x), Cell::Num(lomax_cdf(lambda, x)?), Cell::Num(lomax_cdf_quadrature(lambda, x)?)]);
    }
    Ok(t)
}

fn summary_line(r: &VerificationReport) -> String {
    format!(
        "{:<4} {}  max_rel_err={:.3e}  tol={:.0e}  points={}  failed={}  time={:.2}s",
        r.id,
        if r.pass { "PASS" } else { "FAIL" },
        r.max_rel_err,
        r.rel_tol,
        r.grid_size,
        r.failed_points,
        r.wall_time_s
    )
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let mut opts = RunOptions::from_env()?;
    opts.tol = args.tol;
    let grid = GridOverride::parse(&args.grid)?;
    if !grid.is_empty() && (args.all || args.ids.len() != 1) {
        return Err(CliError::usage("--grid needs exactly one --id"));
    }
    let reports = if args.all {
        run_all(&opts)?
    } else {
        let cases = args.ids.iter().map(|id| find_case(id)).collect::<Result<Vec<_>, _>>()?;
        let g = (!grid.is_empty()).then_some(&grid);
        cases.iter().map(|c| run_identity(c, g, &opts)).collect::<Result<Vec<_>, _>>()?
    };
    emit(&args.output, Format::Json, |f, w| match f {
        Format::Json => Ok(write_json(&reports, w)?),
        Format::Csv => Ok(write_csv(&reports, w)?),
    })?;
    let summary = Summary::of(&reports);
    let mut lines: Vec<String> = reports.iter().map(summary_line).collect();
    lines.push(format!("{}/{} identities passed", summary.passed, summary.total));
    let text = lines.join("\n");
    // keep standard output clean when it carries the report
    if args.output.out.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    if summary.all_pass() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(summary.failed.join(", ")))
    }
}

pub fn approx(args: &ApproxArgs) -> Result<(), CliError> {
    let p = args.params.resolve(&args.n)?;
    let lambda = p.require(p.lambda, "lambda", "approx")?;
    let sigma = p.measure("approx")?;
    let ns = if p.n.is_empty() { DEFAULT_APPROX_N.to_vec() } else { p.n.clone() };
    let xs = if p.x.is_empty() { DEFAULT_APPROX_X.to_vec() } else { p.x.clone() };
    if let Some(&bad) = xs.iter().find(|&&x| !(x > 0.0)) {
        return Err(CliError::usage(format!("approximation points must be positive, got {bad}")));
    }
    let target = GeneralizedBernsteinFn::new(lambda, 0.0, 0.0, sigma.clone())?;
    let exact: Vec<f64> = xs.iter().map(|&x| target.eval(x)).collect::<Result<_, _>>()?;
    let gap_grid = log_space(1e-2, 1e2, 100);
    let mut t = Table::new(["n", "k_n", "truncated_mass", "max_abs_err", "uniform_gap", "status"]);
    for &n in &ns {
        match build_approximation(lambda, &sigma, n)? {
            None => t.push(vec![
                Cell::Int(u64::from(n)),
                Cell::Empty,
                Cell::Num(0.0),
                Cell::Empty,
                Cell::Empty,
                Cell::Text("skipped".into()),
            ]),
            Some(ap) => {
                let mut err: f64 = 0.0;
                for (&x, &e) in xs.iter().zip(&exact) {
                    err = err.max((ap.big_f(x)? - e).abs());
                }
                t.push(vec![
                    Cell::Int(u64::from(n)),
                    Cell::Int(u64::from(ap.state.k_n)),
                    Cell::Num(ap.state.truncated_mass),
                    Cell::Num(err),
                    Cell::Num(ap.uniform_gap(&gap_grid)?),
                    Cell::Text("ok".into()),
                ]);
            }
        }
    }
    emit(&args.output, Format::Csv, |f, w| t.write(f, w))
}

pub fn report(args: &ReportArgs) -> Result<(), CliError> {
    let p = args.params.resolve(&[])?;
    let table = match args.series {
        Series::HK => {
            let kmax = args.n.unwrap_or(100);
            if kmax == 0 {
                return Err(CliError::usage("--n must be at least 1 for h_k"));
            }
            let mut t = Table::new(["k", "argmax", "sup_h_k", "k_times_sup"]);
            for k in 1..=kmax {
                let (s, v) = sup_h_k_at(k);
                t.push(vec![Cell::Int(u64::from(k)), Cell::Num(s), Cell::Num(v), Cell::Num(f64::from(k) * v)]);
            }
            t
        }
        Series::Thorin => {
            let f = ThorinBernsteinFn::new(
                p.require(p.lambda, "lambda", "the thorin series")?,
                p.require(p.alpha, "alpha", "the thorin series")?,
                p.a.unwrap_or(0.0),
                p.b.unwrap_or(0.0),
                p.measure("the thorin series")?,
            )?;
            let g = f.derivative_stieltjes()?;
            let mut t = Table::new(["x", "defining", "beta_form", "hyper_form", "scaled_derivative"]);
            for x in default_grid(&p) {
                let mut row = vec![Cell::Num(x)];
                for r in Representation::ALL {
                    row.push(Cell::Num(f.eval_with(x, r)?));
                }
                row.push(Cell::Num(g.eval(x)?));
                t.push(row);
            }
            t
        }
        Series::Pick => {
            let n = args.n.unwrap_or(3) as usize;
            let mut t = Table::new(["re_z", "im_z", "re_g", "im_g"]);
            for z in pick_grid(0.5, 8.0, 16, 24) {
                let g = counterexample_transform(n, z)?;
                t.push(vec![Cell::Num(z.re), Cell::Num(z.im), Cell::Num(g.re), Cell::Num(g.im)]);
            }
            t
        }
        Series::Lomax => lomax_table(p.require(p.lambda, "lambda", "the lomax series")?, &default_grid(&p))?,
    };
    emit(&args.output, Format::Csv, |f, w| table.write(f, w))
}

trait PossibleName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> PossibleName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}
