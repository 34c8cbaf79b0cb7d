//! Command-line front end. [`run`] returns the process exit status.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{family_of, in_g_star, non_shellable_witness};
use crate::error::Error;
use crate::evenposet::{even_poset, EvenPoset};
use crate::homology::{integral_reduced_homology_with_budget, wedge_summary};
use crate::multigraph::{parse_graph, Multigraph};
use crate::shellability::{falling_report, shell_report, OrderingChoice, DEFAULT_SEARCH_BUDGET};
use crate::toric::{betti_general_with, integral_cohomology, table4, table4_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ordering {
    Auto,
    Explicit,
    Search,
}

#[derive(Debug, Parser)]
#[command(name = "evenshell", version, about = "Even-subgraph posets, shellability and real toric Betti numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Admissible collection as whitespace-separated vertices and edge labels.
    #[arg(long = "A", global = true, value_name = "TOKENS")]
    pub a: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Node cap for backtracking searches (faces for homology).
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership in G* per component, with a witness when outside.
    Classify { graph: PathBuf },
    /// The even poset of (G, A).
    Poset { graph: PathBuf },
    /// Shellability verdict and certificate.
    Shell { graph: PathBuf },
    /// Falling chains of the CL-labeling.
    Falling {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Ordering::Auto)]
        ordering: Ordering,
    },
    /// Reduced homology of the proper part.
    Homology { graph: PathBuf },
    /// Betti numbers of the real toric manifold.
    Betti { graph: PathBuf },
    /// Closed-form Betti table of the bundle paths, n = 2..15.
    Table4,
    /// Smallest non-shellable interval over all (H, A).
    Witness { graph: PathBuf },
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// A report was produced but a search ran out of budget.
    Partial(String, Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_graph(path: &PathBuf) -> Result<Multigraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn even(g: &Multigraph, a: &Option<String>) -> Result<EvenPoset, Failure> {
    let a = a.as_ref().ok_or_else(|| Failure::Usage("--A is required for this subcommand".into()))?;
    let set = g.parse_set(a)?;
    even_poset(g, set)?.into_poset().ok_or(Failure::Domain(Error::Inadmissible))
}

fn only(format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--format {format:?} is not supported here").to_lowercase()))
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn report(cli: &Cli) -> Result<String, Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Classify { graph } => {
            only(fmt, &[Format::Json])?;
            let g = read_graph(graph)?;
            let comps: Vec<String> = g
                .components()
                .iter()
                .map(|c| family_of(c).map(|t| t.to_string()))
                .collect::<Result<_, _>>()?;
            let member = in_g_star(&g);
            let mut v = json!({"in_g_star": member, "components": comps});
            if !member {
                match non_shellable_witness(&g, cli.budget) {
                    Ok(w) => v["witness"] = w.map_or(Value::Null, |w| w.to_json()),
                    Err(e @ Error::BudgetExceeded { .. }) => {
                        v["witness"] = json!("unknown");
                        return Err(Failure::Partial(pretty(&v), e));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(pretty(&v))
        }
        Command::Poset { graph } => {
            only(fmt, &[Format::Json, Format::Dot])?;
            let ep = even(&read_graph(graph)?, &cli.a)?;
            Ok(match fmt {
                Format::Dot => ep.to_dot(),
                _ => pretty(&ep.to_json()),
            })
        }
        Command::Shell { graph } => {
            only(fmt, &[Format::Json])?;
            let ep = even(&read_graph(graph)?, &cli.a)?;
            let r = shell_report(&ep, cli.budget)?;
            Ok(pretty(&r.to_json()))
        }
        Command::Falling { graph, ordering } => {
            only(fmt, &[Format::Json, Format::Csv])?;
            let ep = even(&read_graph(graph)?, &cli.a)?;
            let choice = match ordering {
                Ordering::Auto => OrderingChoice::Auto,
                Ordering::Explicit => OrderingChoice::Explicit,
                Ordering::Search => OrderingChoice::Search,
            };
            let r = falling_report(&ep, cli.budget, choice)?;
            Ok(match fmt {
                Format::Csv => {
                    let mut s = String::from("length,chain\n");
                    for c in &r.chains {
                        s.push_str(&format!("{},{c}\n", c.matches('<').count()));
                    }
                    s
                }
                _ => pretty(&r.to_json()),
            })
        }
        Command::Homology { graph } => {
            only(fmt, &[Format::Json])?;
            let ep = even(&read_graph(graph)?, &cli.a)?;
            let k = ep.poset().proper_order_complex()?;
            let h = integral_reduced_homology_with_budget(&k, usize::try_from(cli.budget).unwrap_or(usize::MAX))?;
            Ok(pretty(&json!({
                "facets": k.facets().len(),
                "reduced_homology": h.to_json(),
                "wedge": wedge_summary(&h).to_string(),
            })))
        }
        Command::Betti { graph } => {
            only(fmt, &[Format::Json, Format::Csv])?;
            let g = read_graph(graph)?;
            let b = betti_general_with(&g, usize::try_from(cli.budget).unwrap_or(usize::MAX), cli.jobs)?;
            Ok(match fmt {
                Format::Csv => {
                    let mut s = String::from("i,betti\n");
                    for (i, x) in b.as_slice().iter().enumerate() {
                        s.push_str(&format!("{i},{x}\n"));
                    }
                    s
                }
                _ => {
                    let mut v = json!({"betti": b.to_json()});
                    if g.is_connected() {
                        v["cohomology"] = integral_cohomology(&g)?.to_json();
                    }
                    pretty(&v)
                }
            })
        }
        Command::Table4 => {
            only(fmt, &[Format::Json, Format::Csv])?;
            Ok(match fmt {
                Format::Csv => table4_csv()?,
                _ => {
                    let rows: Vec<Vec<String>> = table4()?.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
                    pretty(&json!({"columns": (2..=15).collect::<Vec<u32>>(), "rows": rows}))
                }
            })
        }
        Command::Witness { graph } => {
            only(fmt, &[Format::Json])?;
            let g = read_graph(graph)?;
            let w = non_shellable_witness(&g, cli.budget)?;
            Ok(pretty(&json!({"witness": w.map_or(Value::Null, |w| w.to_json())})))
        }
    }
}

fn emit(cli: &Cli, text: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                let _ = writeln!(err, "error: {}: {e}", p.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    EXIT_OK
}

/// Runs the CLI on `argv` (program name first), writing the report to `out`
/// or the `--out` file and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match report(&cli) {
        Ok(text) => emit(&cli, &text, out, err),
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::BudgetExceeded { .. }) {
                EXIT_BUDGET
            } else {
                EXIT_DOMAIN
            }
        }
        Err(Failure::Partial(text, e)) => {
            emit(&cli, &text, out, err);
            let _ = writeln!(err, "error: {e}");
            EXIT_BUDGET
        }
    }
}
