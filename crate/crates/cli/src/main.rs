//! `qclab`: quasi-cocycle experiments on the free group from the command
//! line. Every randomized subcommand takes an explicit seed and produces
//! byte-identical output for identical arguments.
//!
//! Exit codes: `0` success; `2` usage, parse or precondition errors; `1` a
//! mathematical invariant the library guarantees was observed to fail
//! (defect bound exceeded, certified bound exceeded, greedy certificate
//! broken): the distinction separates "property falsified" from "bad
//! invocation".

mod output;
mod repspec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use output::{Report, U2Probe, U2Report};
use qclab_core::analysis::{
    greedy_search, growth_probe, independence_matrix, uc_inequality_test, vanishing_check,
    GrowthFamily,
};
use qclab_core::brooks::{defect, DefectMode, QuasiCocycleSpec};
use qclab_core::spaces::{
    parse_rational, spectral_gap, uc_constants, unit_eigen_angles, LpNorm, ModulusSpec,
    Representation, UcSpace,
};
use qclab_core::words::{buffered, default_buffer_len, default_subgroup_exp, ReducedWord};
use qclab_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "qclab", version, about = "Brooks quasi-cocycle experiments on F2 = <a, b>")]
struct Cli {
    /// Worker threads (default: all cores; also via QCLAB_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
enum Command {
    /// Evaluate H_{w,e}(g)
    Eval {
        /// Pattern word w (cyclically reduced)
        #[arg(long)]
        w: String,
        /// Representation descriptor (trivial | regular:P | matrix:FILE | u2:SEED | rot:SEED)
        #[arg(long)]
        rep: String,
        /// Seed vector literal for the chosen backend
        #[arg(long)]
        e: String,
        /// Group element to evaluate at
        #[arg(long)]
        g: String,
    },
    /// Defect supremum over a ball or a seeded sample
    Defect {
        #[arg(long)]
        w: String,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        e: String,
        /// Exact mode: enumerate all pairs in ball(R)^2
        #[arg(long, conflicts_with_all = ["maxlen", "count", "seed"])]
        exact_radius: Option<usize>,
        /// Override the exact-mode radius guard
        #[arg(long, default_value_t = false)]
        force: bool,
        /// Sampled mode: word length cap
        #[arg(long)]
        maxlen: Option<usize>,
        /// Sampled mode: number of pairs
        #[arg(long)]
        count: Option<usize>,
        /// Sampled mode: seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Norm growth along powers, buffered family words, or the harmonic tail
    Growth {
        #[arg(long)]
        w: String,
        #[arg(long)]
        rep: String,
        /// Seed vector; ignored by the harmonic family (it builds its own)
        #[arg(long, default_value = "")]
        e: String,
        /// powers:G | family | harmonic
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u64,
        /// Record per-class partial orbit sums (powers mode)
        #[arg(long, default_value_t = false)]
        orbit_sums: bool,
        /// Seed for the family-words mode
        #[arg(long)]
        seed: Option<u64>,
        /// Buffer length override
        #[arg(long)]
        ell: Option<usize>,
        /// Subgroup exponent override
        #[arg(long)]
        m: Option<usize>,
    },
    /// Evaluate H on random and small subgroup elements; exact zeros
    Vanish {
        #[arg(long)]
        w: String,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        e: String,
        /// Comma-separated subgroup generators, e.g. "a^2,b"
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        maxlen: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Zero pattern of H_{m_i} on family witnesses of the largest pattern
    Independence {
        /// Strictly increasing list with gcd(m, 6) = 1, e.g. "1,5"
        #[arg(long)]
        m_list: String,
        /// Common prefix word w'
        #[arg(long, default_value = "")]
        w_prime: String,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        e: String,
        #[arg(long, default_value_t = 8)]
        witnesses: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Greedy norm growth with convexity certificates
    Greedy {
        #[arg(long)]
        w: String,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        e: String,
        #[arg(long)]
        steps: u32,
        #[arg(long, default_value_t = 2)]
        y_radius: usize,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Convexity inequality property test
    Ucheck {
        /// l2:D | regular:P
        #[arg(long)]
        space: String,
        /// Radius R as a rational
        #[arg(long)]
        r: String,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Negative control: scale mu by this factor
        #[arg(long, default_value_t = 1)]
        mu_scale: i64,
        /// analytic | sampled:TRIALS:SEED
        #[arg(long, default_value = "analytic")]
        modulus: String,
    },
    /// Sample a Diophantine-generic U(2) representation
    U2 {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        denom_bound: u32,
        /// Probe words for angles and gaps
        #[arg(long, default_value = "a,b,ab,aB")]
        probe: String,
    },
}

fn parse_spec(w: &str, rep: &str, e: &str) -> Result<QuasiCocycleSpec> {
    let rep = repspec::parse_rep(rep)?;
    let e = repspec::parse_vector(&rep, e)?;
    QuasiCocycleSpec::new(ReducedWord::parse(w)?, e, rep)
}

fn parse_word_list(text: &str) -> Result<Vec<ReducedWord>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| ReducedWord::parse(p.trim()))
        .collect()
}

fn parse_uc_space(text: &str) -> Result<UcSpace> {
    match text.split_once(':') {
        Some(("l2", d)) => {
            let dim: usize =
                d.parse().map_err(|_| Error::Parse(format!("bad dimension {d:?}")))?;
            if dim == 0 {
                return Err(Error::Parse("dimension must be positive".into()));
            }
            Ok(UcSpace::Euclidean(dim))
        }
        Some(("regular", p)) => {
            let norm = if p == "inf" {
                LpNorm::Inf
            } else if let Ok(k) = p.parse::<u32>() {
                LpNorm::Exact(k)
            } else if let Ok(f) = p.parse::<f64>() {
                LpNorm::Float(f)
            } else {
                return Err(Error::Parse(format!("bad exponent {p:?}")));
            };
            norm.validate()?;
            Ok(UcSpace::RegularLp(norm))
        }
        _ => Err(Error::Parse(format!("unknown space {text:?} (l2:D | regular:P)"))),
    }
}

fn parse_modulus(text: &str) -> Result<ModulusSpec> {
    if text == "analytic" {
        return Ok(ModulusSpec::Analytic);
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 && parts[0] == "sampled" {
        let trials = parts[1].parse().map_err(|_| Error::Parse("bad modulus trials".into()))?;
        let seed = parts[2].parse().map_err(|_| Error::Parse("bad modulus seed".into()))?;
        return Ok(ModulusSpec::Sampled { trials, seed });
    }
    Err(Error::Parse(format!("unknown modulus {text:?} (analytic | sampled:TRIALS:SEED)")))
}

/// Runs one subcommand; the second component requests a nonzero exit code
/// after the report is written (a falsified invariant, reported in full).
fn run(command: &Command) -> Result<(Report, Option<u8>)> {
    match command {
        Command::Eval { w, rep, e, g } => {
            let spec = parse_spec(w, rep, e)?;
            let value = spec.evaluate(&ReducedWord::parse(g)?);
            let norm = spec.rep.norm(&value)?;
            let support_size = match &value {
                qclab_core::spaces::Vector::Group(v) => v.support_size(),
                qclab_core::spaces::Vector::Complex(v) => v.len(),
                qclab_core::spaces::Vector::Scalar(_) => 1,
            };
            Ok((
                Report::Eval(output::EvalReport {
                    norm_decimal: norm.to_f64(),
                    norm,
                    support_size,
                    vector: value,
                }),
                None,
            ))
        }
        Command::Defect { w, rep, e, exact_radius, force, maxlen, count, seed } => {
            let spec = parse_spec(w, rep, e)?;
            let mode = match (exact_radius, maxlen, count, seed) {
                (Some(radius), None, None, None) => DefectMode::Exact { radius: *radius },
                (None, Some(maxlen), Some(count), Some(seed)) => {
                    DefectMode::Sampled { maxlen: *maxlen, count: *count, seed: *seed }
                }
                _ => {
                    return Err(Error::Precondition(
                        "pass either --exact-radius or all of --maxlen --count --seed".into(),
                    ))
                }
            };
            let bound = spec.defect_bound();
            let report = defect(&spec, mode, Some(bound), *force)?;
            let exit = match report.within_bound() {
                Some(false) => Some(1),
                _ => None,
            };
            Ok((Report::Defect(report), exit))
        }
        Command::Growth { w, rep, e, family, n, orbit_sums, seed, ell, m } => {
            let rep_parsed = repspec::parse_rep(rep)?;
            let family = match family.split_once(':') {
                Some(("powers", g)) => {
                    GrowthFamily::Powers { g: ReducedWord::parse(g)?, orbit_sums: *orbit_sums }
                }
                None if family == "family" => GrowthFamily::FamilyWords {
                    buffer_len: *ell,
                    subgroup_exp: *m,
                    seed: seed.ok_or_else(|| {
                        Error::Precondition("family mode needs --seed".into())
                    })?,
                },
                None if family == "harmonic" => GrowthFamily::Harmonic,
                _ => {
                    return Err(Error::Parse(format!(
                        "unknown family {family:?} (powers:G | family | harmonic)"
                    )))
                }
            };
            // the harmonic family supplies its own tail vector
            let e_vec = if matches!(family, GrowthFamily::Harmonic) {
                qclab_core::spaces::Vector::delta_identity()
            } else {
                repspec::parse_vector(&rep_parsed, e)?
            };
            let spec = QuasiCocycleSpec::new(ReducedWord::parse(w)?, e_vec, rep_parsed)?;
            let series = growth_probe(&spec, &family, *n)?;
            let exit = if series.exceeded.is_empty() { None } else { Some(1) };
            Ok((Report::Growth(series), exit))
        }
        Command::Vanish { w, rep, e, subgroup, samples, maxlen, seed } => {
            let spec = parse_spec(w, rep, e)?;
            let gens = parse_word_list(subgroup)?;
            let report = vanishing_check(&spec, &gens, *samples, *maxlen, *seed)?;
            Ok((Report::Vanish(report), None))
        }
        Command::Independence { m_list, w_prime, rep, e, witnesses, seed } => {
            let ms: Vec<u64> = m_list
                .split(',')
                .map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("bad m {p:?}"))))
                .collect::<Result<_>>()?;
            let rep = repspec::parse_rep(rep)?;
            let e = repspec::parse_vector(&rep, e)?;
            let report = independence_matrix(
                &ms,
                &ReducedWord::parse(w_prime)?,
                &e,
                &rep,
                *witnesses,
                *seed,
            )?;
            Ok((Report::Independence(report), None))
        }
        Command::Greedy { w, rep, e, steps, y_radius, ell, m } => {
            let rep = repspec::parse_rep(rep)?;
            let e = repspec::parse_vector(&rep, e)?;
            let pattern = ReducedWord::parse(w)?;
            let bw = buffered(
                &pattern,
                ell.unwrap_or_else(|| default_buffer_len(&pattern)),
                m.unwrap_or_else(|| default_subgroup_exp(&pattern)),
            )?;
            let report = greedy_search(&bw, &e, &rep, *steps, *y_radius)?;
            Ok((Report::Greedy(report), None))
        }
        Command::Ucheck { space, r, trials, seed, mu_scale, modulus } => {
            let space = parse_uc_space(space)?;
            let radius = parse_rational(r)?;
            let constants = uc_constants(space, &radius, parse_modulus(modulus)?)?;
            let constants =
                if *mu_scale == 1 { constants } else { constants.with_mu_scaled(*mu_scale) };
            let report = uc_inequality_test(space, &constants, *trials, *seed)?;
            // with unscaled constants any violation falsifies the property
            let exit = if *mu_scale == 1 && report.violations_total > 0 { Some(1) } else { None };
            Ok((Report::Ucheck(report), exit))
        }
        Command::U2 { seed, denom_bound, probe } => {
            let rep = match repspec::parse_rep(&format!("u2:{seed}:{denom_bound}"))? {
                Representation::Matrix(m) => m,
                _ => unreachable!(),
            };
            let probes = parse_word_list(probe)?
                .into_iter()
                .map(|word| {
                    let angles = unit_eigen_angles(&rep.matrix_of(&word))?;
                    let ratio =
                        if angles.len() > 1 { angles[0] / angles[1] } else { 1.0 };
                    Ok(U2Probe { gap: spectral_gap(&rep, &word), angle_ratio: ratio, angles, word })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((
                Report::U2(U2Report { rep, denominator_bound: *denom_bound, probes }),
                None,
            ))
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Eval { .. } => "eval",
        Command::Defect { .. } => "defect",
        Command::Growth { .. } => "growth",
        Command::Vanish { .. } => "vanish",
        Command::Independence { .. } => "independence",
        Command::Greedy { .. } => "greedy",
        Command::Ucheck { .. } => "ucheck",
        Command::U2 { .. } => "u2",
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let name = command_name(&cli.command);
    let text = match cli.format {
        Format::Json => {
            let envelope = serde_json::json!({
                "schema": "qclab-v1",
                "command": name,
                "config": &cli.command,
                "report": report.to_json(),
            });
            let mut text = serde_json::to_string_pretty(&envelope).expect("serializable");
            text.push('\n');
            text
        }
        Format::Csv => output::to_csv(name, report),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = cli.threads.or_else(|| {
        std::env::var("QCLAB_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        // a failure here only means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    match run(&cli.command) {
        Ok((report, exit)) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("qclab: cannot write report: {e}");
                return ExitCode::from(2);
            }
            match exit {
                Some(code) => {
                    eprintln!("qclab: invariant violated; see report");
                    ExitCode::from(code)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("qclab: {err}");
            match err {
                Error::Invariant(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_json() {
        let cmd = Command::Vanish {
            w: "a^5b^5a^7b^7".into(),
            rep: "regular:2".into(),
            e: "1:1".into(),
            subgroup: "a^2,b".into(),
            samples: 100,
            maxlen: 200,
            seed: 7,
        };
        let json = serde_json::to_value(&cmd).unwrap();
        let back: Command = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, cmd);
        let again = serde_json::to_value(&back).unwrap();
        assert_eq!(json, again);
    }

    #[test]
    fn space_and_modulus_descriptors() {
        assert!(matches!(parse_uc_space("l2:8").unwrap(), UcSpace::Euclidean(8)));
        assert!(matches!(
            parse_uc_space("regular:3").unwrap(),
            UcSpace::RegularLp(LpNorm::Exact(3))
        ));
        assert!(parse_uc_space("l2:0").is_err());
        assert!(parse_uc_space("what").is_err());
        assert!(matches!(parse_modulus("analytic").unwrap(), ModulusSpec::Analytic));
        assert!(matches!(
            parse_modulus("sampled:1000:3").unwrap(),
            ModulusSpec::Sampled { trials: 1000, seed: 3 }
        ));
        assert!(parse_modulus("sampled").is_err());
    }
}
