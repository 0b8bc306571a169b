//! Command-line front end. Every query of the library is exposed as a
//! subcommand with machine-readable output: JSON on stdout (CSV for the
//! tabular classify commands), diagnostics on stderr.
//!
//! Exit codes: 0 success, 2 usage error, 3 unsupported range,
//! 4 violated domain precondition.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::discforms::{GenusSymbol, Parity};
use crate::embeddings::{vector_exists, vector_orbits, EmbeddingQuery};
use crate::ihs::{ambiguous_n, classify, induced_realizable, ClassificationRow, DeformationType};
use crate::latgeom::{isometries, orbit_decomposition, GramLattice, IsomGroup};
use crate::theta::{orbit_series, primitive_counts, theta_series, DefiniteLatticeId};
use crate::unimodular::{isometry_exists, k3_exists, IsometryInvariants};
use crate::{classnumber, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

#[derive(Parser)]
#[command(
    name = "isoclass",
    version,
    about = "Odd-prime-order isometries of unimodular and p-elementary lattices",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Queries about p-elementary genus symbols
    Genus {
        #[command(subcommand)]
        cmd: GenusCmd,
    },
    /// Order-p isometries of unimodular lattices
    Unimodular {
        #[command(subcommand)]
        cmd: UnimodularCmd,
    },
    /// Non-symplectic prime-order automorphisms of K3 surfaces
    K3 {
        #[command(subcommand)]
        cmd: K3Cmd,
    },
    /// Relative class number of the p-th cyclotomic field
    Hminus {
        #[arg(long = "p")]
        p: i64,
    },
    /// Primitive vectors in p-elementary lattices
    Vector {
        #[command(subcommand)]
        cmd: VectorCmd,
    },
    /// Primitive embeddings of the rank-2 lattice of discriminant 3
    A2 {
        #[command(subcommand)]
        cmd: A2Cmd,
    },
    /// Exact theta series and orbit counts of the definite invariant lattices
    Theta(ThetaArgs),
    /// Classification tables for the known deformation types
    Ihs {
        #[command(subcommand)]
        cmd: IhsCmd,
    },
    /// Brute-force oracle on explicit Gram matrices
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Subcommand)]
enum GenusCmd {
    /// Decide whether the genus contains a lattice
    Exists { symbol: String },
}

#[derive(Subcommand)]
enum UnimodularCmd {
    /// Decide existence of an isometry with the given invariants
    Exists(UnimodularArgs),
}

#[derive(Args)]
struct UnimodularArgs {
    #[arg(long, value_enum)]
    parity: ParityArg,
    /// Ambient signature "l+,l-"
    #[arg(long, value_parser = parse_pair)]
    sig: (i64, i64),
    #[arg(long = "p")]
    p: i64,
    /// Coinvariant signature "s+,s-"
    #[arg(long = "s", value_parser = parse_pair)]
    s: (i64, i64),
    /// Discriminant exponent of the coinvariant lattice
    #[arg(long = "n")]
    n: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Subcommand)]
enum K3Cmd {
    /// All triples (r, a) for the prime
    Classify {
        #[arg(long = "p")]
        p: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide one triple
    Exists {
        #[arg(long = "p")]
        p: i64,
        #[arg(long = "r")]
        r: i64,
        #[arg(long = "a")]
        a: i64,
    },
}

#[derive(Subcommand)]
enum VectorCmd {
    Exists(VectorArgs),
    Orbits(VectorArgs),
}

#[derive(Args)]
struct VectorArgs {
    /// Genus symbol, e.g. "II_(2,2)5^-1"
    #[arg(long)]
    genus: String,
    /// The even square of the vector
    #[arg(long = "k")]
    k: u64,
    /// Divisibility (1 or p)
    #[arg(long)]
    div: i64,
}

#[derive(Subcommand)]
enum A2Cmd {
    Embeds {
        #[arg(long)]
        lminus: u32,
        #[arg(long = "p")]
        p: i64,
        /// Sign of the genus: "+1" or "-1"
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        eps: i64,
        #[arg(long = "n")]
        n: u32,
        /// Divisibility of the embedded sublattice (1 or 3)
        #[arg(long)]
        div: i64,
    },
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long)]
    lattice: String,
    /// Number of whole-q coefficients (k < prec)
    #[arg(long)]
    prec: u64,
    /// Emit primitive-vector counts r(k) instead of a(k)
    #[arg(long, conflicts_with = "orbits")]
    primitive: bool,
    /// Emit orbit counts b(k) under the given group instead of a(k)
    #[arg(long, value_name = "O|SO")]
    orbits: Option<String>,
}

#[derive(Subcommand)]
enum IhsCmd {
    Classify {
        #[arg(long = "type")]
        deformation_type: String,
        #[arg(long = "p")]
        p: i64,
        /// Manifold index (fixes the square of the marked vector)
        #[arg(long = "n")]
        n: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    Ambiguous {
        #[arg(long = "type")]
        deformation_type: String,
        #[arg(long = "p")]
        p: i64,
        #[arg(long = "r")]
        r: u32,
        #[arg(long = "a")]
        a: u32,
        #[arg(long)]
        div: Option<i64>,
        #[arg(long)]
        nmax: u64,
    },
    Induced {
        #[arg(long = "type")]
        deformation_type: String,
        #[arg(long = "p")]
        p: i64,
        #[arg(long = "r")]
        r: u32,
        #[arg(long = "a")]
        a: u32,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    Orbits {
        /// Gram matrix as a JSON array of rows, e.g. "[[2,1],[1,2]]"
        #[arg(long)]
        gram: String,
        #[arg(long)]
        norm: i64,
        #[arg(long)]
        group: String,
        /// Restrict to primitive vectors
        #[arg(long)]
        primitive: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"a,b\", got {s:?}"));
    }
    let a = parts[0].parse().map_err(|e| format!("{e}"))?;
    let b = parts[1].parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn parse_sign(s: &str) -> Result<i64, String> {
    match s {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(format!("expected +1 or -1, got {s:?}")),
    }
}

/// Run the CLI on explicit arguments, writing payloads to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Argument(_) => EXIT_DOMAIN,
                Error::Unsupported(_) => EXIT_UNSUPPORTED,
            }
        }
    }
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> crate::Result<()> {
    writeln!(out, "{value}").map_err(|e| Error::Argument(format!("write failed: {e}")))
}

fn emit_rows(out: &mut dyn Write, rows: &[ClassificationRow], format: Format) -> crate::Result<()> {
    match format {
        Format::Json => emit(out, &serde_json::to_value(rows).expect("serializable")),
        Format::Csv => {
            let mut text = String::from(ClassificationRow::csv_header());
            for row in rows {
                text.push('\n');
                text.push_str(&row.to_csv());
            }
            writeln!(out, "{text}").map_err(|e| Error::Argument(format!("write failed: {e}")))
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> crate::Result<()> {
    match cmd {
        Command::Genus {
            cmd: GenusCmd::Exists { symbol },
        } => {
            let g: GenusSymbol = symbol.parse()?;
            emit(
                out,
                &json!({ "genus": g.to_string(), "exists": g.exists() }),
            )
        }
        Command::Unimodular {
            cmd: UnimodularCmd::Exists(args),
        } => {
            let inv = IsometryInvariants {
                p: args.p,
                parity: match args.parity {
                    ParityArg::Even => Parity::Even,
                    ParityArg::Odd => Parity::Odd,
                },
                l_plus: args.sig.0,
                l_minus: args.sig.1,
                s_plus: args.s.0,
                s_minus: args.s.1,
                n: args.n,
            };
            emit(
                out,
                &json!({
                    "parity": match args.parity { ParityArg::Even => "even", ParityArg::Odd => "odd" },
                    "l_plus": inv.l_plus,
                    "l_minus": inv.l_minus,
                    "p": inv.p,
                    "s_plus": inv.s_plus,
                    "s_minus": inv.s_minus,
                    "n": inv.n,
                    "m": inv.m(),
                    "exists": isometry_exists(&inv),
                }),
            )
        }
        Command::K3 { cmd } => match cmd {
            K3Cmd::Classify { p, format } => {
                let rows = classify(DeformationType::K3, p, None)?;
                emit_rows(out, &rows, format)
            }
            K3Cmd::Exists { p, r, a } => emit(
                out,
                &json!({ "p": p, "r": r, "a": a, "exists": k3_exists(p, r, a) }),
            ),
        },
        Command::Hminus { p } => {
            let h = classnumber::relative_class_number(p)?;
            let value = match h.to_u64() {
                Some(small) => json!(small),
                None => json!(h.to_string()),
            };
            emit(out, &json!({ "p": p, "hminus": value }))
        }
        Command::Vector { cmd } => {
            let (args, orbits) = match cmd {
                VectorCmd::Exists(a) => (a, false),
                VectorCmd::Orbits(a) => (a, true),
            };
            let genus: GenusSymbol = args.genus.parse()?;
            let query = EmbeddingQuery {
                genus,
                k: args.k,
                div: args.div,
            };
            if orbits {
                let report = vector_orbits(&query)?;
                emit(
                    out,
                    &json!({
                        "genus": genus.to_string(),
                        "k": args.k,
                        "div": args.div,
                        "exists": report.exists,
                        "orbit_count": report.orbit_count.as_number(),
                        "special_case": report.special_case,
                        "l1_set": report.l1_set,
                        "l0_set": report.l0_set,
                    }),
                )
            } else {
                let existence = vector_exists(&query)?;
                emit(
                    out,
                    &json!({
                        "genus": genus.to_string(),
                        "k": args.k,
                        "div": args.div,
                        "exists": existence,
                    }),
                )
            }
        }
        Command::A2 {
            cmd:
                A2Cmd::Embeds {
                    lminus,
                    p,
                    eps,
                    n,
                    div,
                },
        } => {
            let embeds = crate::embeddings::a2_embeds(lminus, p, eps, n, div)?;
            emit(
                out,
                &json!({
                    "l_minus": lminus, "p": p, "eps": eps, "n": n, "div": div,
                    "embeds": embeds,
                }),
            )
        }
        Command::Theta(args) => {
            let id: DefiniteLatticeId = args.lattice.parse()?;
            if let Some(group) = &args.orbits {
                let group: IsomGroup = group.parse()?;
                let series = orbit_series(id, group, args.prec)?;
                let pairs: Vec<(u64, u64)> = (1..=args.prec).zip(series.counts).collect();
                emit(out, &serde_json::to_value(pairs).expect("serializable"))
            } else {
                let a = theta_series(id, args.prec)?;
                let coeffs = if args.primitive {
                    primitive_counts(&a)
                } else {
                    a
                };
                let pairs: Vec<(u64, i64)> = coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| (k as u64, c))
                    .collect();
                emit(out, &serde_json::to_value(pairs).expect("serializable"))
            }
        }
        Command::Ihs { cmd } => match cmd {
            IhsCmd::Classify {
                deformation_type,
                p,
                n,
                format,
            } => {
                let t: DeformationType = deformation_type.parse()?;
                let rows = classify(t, p, n)?;
                emit_rows(out, &rows, format)
            }
            IhsCmd::Ambiguous {
                deformation_type,
                p,
                r,
                a,
                div,
                nmax,
            } => {
                let t: DeformationType = deformation_type.parse()?;
                let ns = ambiguous_n(t, p, r, a, div, nmax)?;
                emit(
                    out,
                    &json!({
                        "type": t, "p": p, "r": r, "a": a, "div": div, "nmax": nmax,
                        "ambiguous_n": ns,
                    }),
                )
            }
            IhsCmd::Induced {
                deformation_type,
                p,
                r,
                a,
            } => {
                let t: DeformationType = deformation_type.parse()?;
                let realizable = induced_realizable(t, p, r, a)?;
                emit(
                    out,
                    &json!({ "type": t, "p": p, "r": r, "a": a, "realizable": realizable }),
                )
            }
        },
        Command::Oracle {
            cmd:
                OracleCmd::Orbits {
                    gram,
                    norm,
                    group,
                    primitive,
                },
        } => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(&gram)
                .map_err(|e| Error::arg(format!("bad Gram matrix JSON: {e}")))?;
            let lattice = GramLattice::new(rows)?;
            let group: IsomGroup = group.parse()?;
            let matrices = isometries(&lattice, group)?;
            let orbits = orbit_decomposition(&lattice, &matrices, norm, primitive)?;
            emit(out, &serde_json::to_value(&orbits).expect("serializable"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> String {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        assert_eq!(code, EXIT_OK, "stderr: {}", String::from_utf8_lossy(&err));
        String::from_utf8(out).unwrap()
    }

    fn run_code(args: &[&str]) -> i32 {
        let mut out = Vec::new();
        let mut err = Vec::new();
        run(args.iter().copied(), &mut out, &mut err)
    }

    #[test]
    fn hminus_json() {
        assert_eq!(
            run_ok(&["isoclass", "hminus", "--p", "23"]).trim(),
            r#"{"p":23,"hminus":3}"#
        );
    }

    #[test]
    fn genus_exists_json() {
        let s = run_ok(&["isoclass", "genus", "exists", "II_(2,2)5^-1"]);
        assert_eq!(s.trim(), r#"{"genus":"II_(2,2)5^-1","exists":true}"#);
    }

    #[test]
    fn vector_orbits_json() {
        let s = run_ok(&[
            "isoclass",
            "vector",
            "orbits",
            "--genus",
            "II_(2,2)5^-1",
            "--k",
            "50",
            "--div",
            "1",
        ]);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["orbit_count"], 2);
        assert_eq!(v["special_case"], true);
    }

    #[test]
    fn k3_exists_false_is_exit_zero() {
        let s = run_ok(&[
            "isoclass", "k3", "exists", "--p", "23", "--r", "2", "--a", "1",
        ]);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["exists"], false);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_code(&["isoclass", "nonsense"]), EXIT_USAGE);
        assert_eq!(
            run_code(&["isoclass", "hminus", "--p", "211"]),
            EXIT_UNSUPPORTED
        );
        assert_eq!(run_code(&["isoclass", "hminus", "--p", "9"]), EXIT_DOMAIN);
        assert_eq!(
            run_code(&[
                "isoclass",
                "vector",
                "exists",
                "--genus",
                "II_(2,2)5^-1",
                "--k",
                "3",
                "--div",
                "1"
            ]),
            EXIT_DOMAIN
        );
        assert_eq!(
            run_code(&["isoclass", "ihs", "classify", "--type", "OG6", "--p", "3"]),
            EXIT_UNSUPPORTED
        );
        assert_eq!(run_code(&["isoclass", "--help"]), EXIT_OK);
    }

    #[test]
    fn unimodular_exists_roundtrip() {
        let s = run_ok(&[
            "isoclass",
            "unimodular",
            "exists",
            "--parity",
            "even",
            "--sig",
            "3,19",
            "--p",
            "3",
            "--s",
            "2,10",
            "--n",
            "4",
        ]);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["exists"], true);
        assert_eq!(v["m"], 1);
    }

    #[test]
    fn theta_pairs() {
        let s = run_ok(&["isoclass", "theta", "--lattice", "A2neg", "--prec", "3"]);
        assert_eq!(s.trim(), "[[0,1],[1,6],[2,0]]");
        let s = run_ok(&[
            "isoclass",
            "theta",
            "--lattice",
            "A2neg",
            "--prec",
            "3",
            "--orbits",
            "O",
        ]);
        assert_eq!(s.trim(), "[[1,1],[2,0],[3,1]]");
    }

    #[test]
    fn oracle_orbits_json() {
        let s = run_ok(&[
            "isoclass",
            "oracle",
            "orbits",
            "--gram",
            "[[2,1],[1,2]]",
            "--norm",
            "2",
            "--group",
            "O",
            "--primitive",
        ]);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 1);
        assert_eq!(v[0]["size"], 6);
    }

    #[test]
    fn csv_format() {
        let s = run_ok(&[
            "isoclass", "ihs", "classify", "--type", "K3n", "--p", "23", "--n", "7", "--format",
            "csv",
        ]);
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), ClassificationRow::csv_header());
        assert!(lines.next().unwrap().starts_with("K3n,23,2,1,"));
    }

    #[test]
    fn a2_embeds_cli() {
        let s = run_ok(&[
            "isoclass", "a2", "embeds", "--lminus", "1", "--p", "5", "--eps", "-1", "--n", "2",
            "--div", "1",
        ]);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["embeds"], true);
    }
}
