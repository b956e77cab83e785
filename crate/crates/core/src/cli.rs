//! Command-line surface. [`cli_dispatch`] is the whole program minus process
//! plumbing, so tests can drive it in-process.

use std::fs;

use clap::{Args, Parser, Subcommand};

use crate::derivation::{pullback_invert, rothstein_decompose, SuperDerivation};
use crate::geometry::{
    gr_manifold, lift_is_global, mat2, morphism_check_global, nilpotent_flow, FamilyRegistry, LiftFamily, Mat2,
    SuperManifoldData,
};
use crate::grassmann::{ChartId, SuperFunction};
use crate::io::{self, Report};
use crate::lie::{
    express, gr_comparison, hc_pair_report, jacobi_check, solve_global_fields, structure_constants,
    weight_decomposition,
};
use crate::scalar::GaussianRational;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "supervec", version, about = "Vector fields and automorphisms of (1|n) supermanifolds over P^1")]
struct Cli {
    /// Emit key=value lines instead of the human report.
    #[arg(long, global = true)]
    machine: bool,
    /// Override the polynomial degree cap of the solver.
    #[arg(long, global = true, value_name = "INT")]
    cap: Option<u32>,
    /// Lift family (default: detected from the manifold shape).
    #[arg(long, global = true, value_name = "NAME")]
    family: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ManifoldArg {
    #[arg(long, value_name = "PATH")]
    manifold: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis of global vector fields and dimensions.
    Vec(ManifoldArg),
    /// Structure constants and the Jacobi verdict.
    Brackets(ManifoldArg),
    /// The split model and the dimension comparison.
    Gr(ManifoldArg),
    /// Weights of ad(h) on the odd part.
    Weights {
        #[command(flatten)]
        m: ManifoldArg,
        /// Basis index of an even element, or H for the image of diag(1,-1).
        #[arg(long, value_name = "INDEX|H")]
        cartan: String,
    },
    /// Split a pullback into its degree-preserving part and exp(Y).
    Decompose {
        #[arg(long, value_name = "PATH")]
        pullback: String,
    },
    /// Inverse of a pullback.
    Invert {
        #[arg(long, value_name = "PATH")]
        pullback: String,
    },
    /// Pullback of the composite: the first file's map after the second's.
    Compose {
        #[arg(long, value_name = "PATH", num_args = 1, required = true)]
        pullback: Vec<String>,
    },
    /// Flow exp(tX) of an even nilpotent field.
    Flow {
        #[command(flatten)]
        m: ManifoldArg,
        /// Values on coordinates, e.g. "z = t1*t2; t1 = 0".
        #[arg(long, value_name = "VALUES", allow_hyphen_values = true)]
        field: String,
        #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
        time: String,
    },
    /// Validate a manifold file; optionally classify a pullback on it.
    Check {
        #[command(flatten)]
        m: ManifoldArg,
        #[arg(long, value_name = "PATH")]
        pullback: Option<String>,
    },
    /// Full Harish-Chandra pair report.
    Report(ManifoldArg),
}

/// Exit code and the two output streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation; `args` excludes the program name.
pub fn cli_dispatch<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("supervec".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match run(&cli) {
        Ok(r) => Outcome {
            code: 0,
            stdout: r.render(cli.machine),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error[{}]: {e}\n", e.code()),
        },
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn load_manifold(path: &str) -> Result<SuperManifoldData> {
    io::parse_manifold_file(&read(path)?)
}

fn load_pullback(path: &str) -> Result<crate::grassmann::PullbackData> {
    io::parse_pullback_file(&read(path)?)
}

fn choose_family<'r>(
    registry: &'r FamilyRegistry,
    name: Option<&str>,
    m: &SuperManifoldData,
) -> Result<&'r dyn LiftFamily> {
    match name {
        Some(n) => {
            let f = registry.get(n)?;
            f.degrees(m)?;
            Ok(f)
        }
        None => registry.detect(m).ok_or_else(|| Error::FamilyShapeMismatch {
            family: "auto".into(),
            reason: format!("none of {} fits this manifold", registry.names().join(", ")),
        }),
    }
}

fn parse_constant(text: &str) -> Result<GaussianRational> {
    let f = io::parse_superfunction(text, 0)?;
    f.reduced()
        .as_constant()
        .ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: format!("'{text}' is not a constant"),
        })
}

/// `z = expr; t1 = expr; ...`; unnamed coordinates map to 0.
fn parse_field(text: &str, n: usize) -> Result<SuperDerivation> {
    let mut even = SuperFunction::zero(ChartId::Zero, n);
    let mut odd = vec![SuperFunction::zero(ChartId::Zero, n); n];
    let mut seen = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("field entry '{part}' is not 'coordinate = expr'")))?;
        let key = key.trim();
        if seen.contains(&key) {
            return Err(Error::Format(format!("coordinate '{key}' given twice")));
        }
        seen.push(key);
        let f = io::parse_superfunction(value, n)?;
        if key == "z" {
            even = f;
        } else if let Some(j) = key.strip_prefix('t').and_then(|j| j.parse::<usize>().ok()).filter(|j| (1..=n).contains(j)) {
            odd[j - 1] = f;
        } else {
            return Err(Error::Format(format!("unknown coordinate '{key}'")));
        }
    }
    SuperDerivation::new(even, odd)
}

fn run(cli: &Cli) -> Result<Report> {
    let registry = FamilyRegistry::standard();
    match &cli.command {
        Command::Vec(a) => {
            let b = solve_global_fields(&load_manifold(&a.manifold)?, cli.cap)?;
            Ok(io::basis_report(&b))
        }
        Command::Brackets(a) => {
            let b = solve_global_fields(&load_manifold(&a.manifold)?, cli.cap)?;
            let s = structure_constants(&b)?;
            let ok = jacobi_check(&s);
            Ok(io::brackets_report(&s, ok))
        }
        Command::Gr(a) => {
            let m = load_manifold(&a.manifold)?;
            let cmp = gr_comparison(&m, cli.cap)?;
            Ok(io::gr_report(&gr_manifold(&m), &cmp))
        }
        Command::Weights { m, cartan } => {
            let m = load_manifold(&m.manifold)?;
            let b = solve_global_fields(&m, cli.cap)?;
            let s = structure_constants(&b)?;
            let h = if cartan == "H" {
                let fam = choose_family(&registry, cli.family.as_deref(), &m)?;
                let sigma = fam.sl2_embedding(&m, &mat2(1, 0, 0, -1), &GaussianRational::from_int(0))?;
                express(&b, &sigma)?
            } else {
                let i: usize = cartan.parse().map_err(|_| Error::Syntax {
                    pos: 0,
                    msg: format!("--cartan expects a basis index or H, got '{cartan}'"),
                })?;
                b.element(i)?;
                let mut v = vec![GaussianRational::from_int(0); b.dim()];
                v[i] = GaussianRational::from_int(1);
                v
            };
            let w = weight_decomposition(&s, &h)?;
            Ok(io::weights_report(&h, &w))
        }
        Command::Decompose { pullback } => Ok(io::decomposition_report(&rothstein_decompose(&load_pullback(pullback)?)?)),
        Command::Invert { pullback } => Ok(io::pullback_report(&pullback_invert(&load_pullback(pullback)?)?)),
        Command::Compose { pullback } => {
            let mut acc = load_pullback(&pullback[0])?;
            for path in &pullback[1..] {
                acc = acc.compose(&load_pullback(path)?)?;
            }
            Ok(io::pullback_report(&acc))
        }
        Command::Flow { m, field, time } => {
            let m = load_manifold(&m.manifold)?;
            let x = parse_field(field, m.odd_dim())?;
            let t = parse_constant(time)?;
            Ok(io::pullback_report(&nilpotent_flow(&m, &x, &t)?))
        }
        Command::Check { m, pullback } => {
            let m = load_manifold(&m.manifold)?;
            let mut r = io::manifold_summary(&m);
            r.pair("valid", "valid", true);
            if !m.is_odd_point() {
                match choose_family(&registry, cli.family.as_deref(), &m) {
                    Ok(fam) => {
                        let probe: Mat2 = mat2(2, 1, 3, 2);
                        r.pair("family", "lift family", fam.name());
                        r.pair("family_lift_global", "lift of [[2,1],[3,2]] is global", lift_is_global(fam, &m, &probe)?);
                    }
                    Err(e) if cli.family.is_some() => return Err(e),
                    Err(_) => {
                        r.pair("family", "lift family", "none");
                    }
                }
            }
            if let Some(p) = pullback {
                r.append(io::verdict_report(morphism_check_global(&m, &load_pullback(p)?)?));
            }
            Ok(r)
        }
        Command::Report(a) => {
            let m = load_manifold(&a.manifold)?;
            let h = hc_pair_report(&m, cli.cap)?;
            Ok(io::hc_report(&m, &h))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_values() {
        let x = parse_field("z = t1*t2; t2 = z", 2).unwrap();
        assert_eq!(io::print_superfunction(x.even_coeff()), "t1*t2");
        assert!(x.odd_coeffs()[0].is_zero());
        assert!(matches!(parse_field("q = 1", 1), Err(Error::Format(_))));
        assert!(matches!(parse_field("t2 = 1", 1), Err(Error::Format(_))));
        assert!(matches!(parse_field("z = 1; z = 2", 1), Err(Error::Format(_))));
    }

    #[test]
    fn constants() {
        assert_eq!(parse_constant("-3/4").unwrap(), GaussianRational::ratio(-3, 4));
        assert!(parse_constant("z").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let o = cli_dispatch(["frobnicate"]);
        assert_eq!(o.code, 2);
        assert!(o.stdout.is_empty());
        let o = cli_dispatch(["vec", "--manifold", "/nonexistent.smf"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.starts_with("error[IoError]"), "{}", o.stderr);
        assert_eq!(cli_dispatch(["--help"]).code, 0);
    }
}
