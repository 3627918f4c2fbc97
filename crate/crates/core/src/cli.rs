//! Command-line front end. [`run_command`] never touches the process
//! streams; the binary prints what it returns.
//!
//! Exit status: 0 success, 1 a query answered `not-derivable` /
//! `not-independent` (or `compare` found disagreements), 2 usage or parse
//! error, 3 semantic or model error.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::{AlgebraKind, Table, VarSet, Valuation};
use crate::converters::{d_separated, moral_separated};
use crate::dot::to_dot;
use crate::error::{Error, Result};
use crate::fusion::marginal;
use crate::independence::{disjoint_triples, enumerate_ci, numeric_holds, Criterion, StructuralOracle, Verdict};
use crate::model::{parse_model, ModelFile, ModelKind};
use crate::network::ValuationNetwork;
use crate::random::random_model;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "valnet", version, about = "Valuation networks: marginals and conditional independence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide r ⊥ s | v with one criterion
    Query {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        v: Vec<String>,
        #[arg(long, value_enum, default_value_t = CriterionArg::Vn)]
        criterion: CriterionArg,
    },
    /// List every structural verdict with |r|, |s| at most K
    Enumerate {
        file: String,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
    /// Marginal of the joint valuation by fusion
    Marginal {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<String>,
    },
    /// Convert a graph model into a valuation network model
    Convert {
        file: String,
        #[arg(long, value_enum)]
        to: ConvertTarget,
    },
    /// Run every applicable criterion on every triple and report disagreements
    Compare {
        file: String,
        /// Bound on |r| and |s| (default: no bound)
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Print a seeded random model
    Random {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = AlgebraArg::Probability)]
        algebra: AlgebraArg,
        #[arg(long)]
        no_tables: bool,
    },
    /// Graphviz rendering of the valuation network
    Dot { file: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Vn,
    Dsep,
    Moral,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvertTarget {
    Vn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Vn,
    Ug,
    Dag,
    Dbg,
    Rcg,
}

impl From<KindArg> for ModelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Vn => ModelKind::Vn,
            KindArg::Ug => ModelKind::Ug,
            KindArg::Dag => ModelKind::Dag,
            KindArg::Dbg => ModelKind::Dbg,
            KindArg::Rcg => ModelKind::Rcg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgebraArg {
    Probability,
    Kappa,
    Possibility,
}

impl From<AlgebraArg> for AlgebraKind {
    fn from(a: AlgebraArg) -> Self {
        match a {
            AlgebraArg::Probability => AlgebraKind::Probability,
            AlgebraArg::Kappa => AlgebraKind::Kappa,
            AlgebraArg::Possibility => AlgebraKind::Possibility,
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput { status: 2, stdout: String::new(), stderr: text }
            } else {
                CommandOutput { status: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((status, stdout)) => CommandOutput { status, stdout, stderr: String::new() },
        Err(e) => CommandOutput {
            status: if e.is_syntax() { 2 } else { 3 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn load(path: &str) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {path}: {e}")))?;
    parse_model(&text)
}

fn set(names: Vec<String>) -> VarSet {
    names.into_iter().filter(|n| !n.is_empty()).collect()
}

fn joint_for_numeric(network: &ValuationNetwork) -> Result<Valuation> {
    match network.kind() {
        Some(AlgebraKind::Possibility) => {
            Err(Error::Unsupported { op: "numeric independence testing", kind: AlgebraKind::Possibility })
        }
        _ if !network.has_tables() || network.nodes().is_empty() => {
            Err(Error::StructureOnly("numeric criterion needs tables".into()))
        }
        _ => network.joint(),
    }
}

fn require_dag(file: &ModelFile) -> Result<&crate::converters::Dag> {
    file.dag().ok_or_else(|| Error::Domain("d-separation and moralization need a dag model".into()))
}

fn dispatch(command: Command) -> Result<(i32, String)> {
    let mut out = String::new();
    match command {
        Command::Query { file, r, s, v, criterion } => {
            let file = load(&file)?;
            let network = file.to_network()?;
            let (r, s, v) = (set(r), set(s), set(v));
            let (criterion, verdict) = match criterion {
                CriterionArg::Vn => {
                    let st = StructuralOracle::new(&network).statement(&r, &s, &v)?;
                    (st.criterion, st.verdict)
                }
                CriterionArg::Dsep => {
                    let c = Criterion::DSeparation;
                    (c, c.verdict(d_separated(require_dag(&file)?, &r, &s, &v)?))
                }
                CriterionArg::Moral => {
                    let c = Criterion::Moralization;
                    (c, c.verdict(moral_separated(require_dag(&file)?, &r, &s, &v)?))
                }
                CriterionArg::Numeric => {
                    if r.is_empty() || s.is_empty() {
                        return Err(Error::Domain("r and s must be non-empty".into()));
                    }
                    let c = Criterion::Numeric;
                    (c, c.verdict(numeric_holds(&joint_for_numeric(&network)?, &r, &s, &v)?))
                }
            };
            let _ = writeln!(out, "{verdict} ({criterion})");
            Ok((if verdict == Verdict::Independent { 0 } else { 1 }, out))
        }
        Command::Enumerate { file, max_size } => {
            let network = load(&file)?.to_network()?;
            for st in enumerate_ci(&network, max_size)? {
                let _ = writeln!(out, "{st}");
            }
            Ok((0, out))
        }
        Command::Marginal { file, target } => {
            let network = load(&file)?.to_network()?;
            let m = marginal(&network, &target)?;
            write_valuation(&mut out, &m);
            Ok((0, out))
        }
        Command::Convert { file, to: ConvertTarget::Vn } => {
            let network = load(&file)?.to_network()?;
            out.push_str(&ModelFile::from_network(&network).serialize());
            Ok((0, out))
        }
        Command::Compare { file, max_size } => {
            let file = load(&file)?;
            let network = file.to_network()?;
            let disagreements = compare(&file, &network, max_size, &mut out)?;
            Ok((if disagreements == 0 { 0 } else { 1 }, out))
        }
        Command::Random { kind, vars, seed, algebra, no_tables } => {
            if vars == 0 {
                return Err(Error::Usage("--vars must be at least 1".into()));
            }
            if vars > 26 {
                return Err(Error::Usage("--vars must be at most 26".into()));
            }
            let model = random_model(kind.into(), vars, seed, algebra.into(), !no_tables)?;
            out.push_str(&model.serialize());
            Ok((0, out))
        }
        Command::Dot { file } => {
            let network = load(&file)?.to_network()?;
            out.push_str(&to_dot(&network));
            Ok((0, out))
        }
    }
}

fn write_valuation(out: &mut String, v: &Valuation) {
    let names: Vec<&str> = v.domain().names().collect();
    let _ = writeln!(out, "# {} marginal over {}", v.kind(), v.domain());
    let entries: Vec<String> = match v.table() {
        Table::Real(x) => x.iter().map(ToString::to_string).collect(),
        Table::Rank(x) => x.iter().map(ToString::to_string).collect(),
    };
    for (i, e) in entries.iter().enumerate() {
        let config = v.domain().config(i);
        let cells: Vec<String> = names.iter().zip(&config).map(|(n, x)| format!("{n}={x}")).collect();
        if cells.is_empty() {
            let _ = writeln!(out, "{e}");
        } else {
            let _ = writeln!(out, "{} {e}", cells.join(" "));
        }
    }
}

/// Structural claims that must agree with the other criteria: d-separation
/// and moralization must coincide, d-separation must imply VN separation,
/// and any structural independence must hold numerically.
fn compare(file: &ModelFile, network: &ValuationNetwork, max_size: Option<usize>, out: &mut String) -> Result<usize> {
    let names: Vec<String> = network.variable_names().into_iter().collect();
    let mut criteria = vec![Criterion::VnSeparation];
    let dag = file.dag();
    if dag.is_some() {
        criteria.extend([Criterion::DSeparation, Criterion::Moralization]);
    }
    let joint = if network.has_tables() && !network.nodes().is_empty() && network.kind() != Some(AlgebraKind::Possibility) {
        criteria.push(Criterion::Numeric);
        Some(network.joint()?)
    } else {
        None
    };
    let mut oracle = StructuralOracle::new(network);
    let triples = disjoint_triples(&names, max_size.unwrap_or(names.len()));
    let mut independent = vec![0usize; criteria.len()];
    let mut disagreements = Vec::new();
    for (r, s, v) in &triples {
        let mut verdicts = Vec::with_capacity(criteria.len());
        for c in &criteria {
            let holds = match c {
                Criterion::VnSeparation => oracle.holds(r, s, v)?,
                Criterion::DSeparation => d_separated(dag.expect("dag"), r, s, v)?,
                Criterion::Moralization => moral_separated(dag.expect("dag"), r, s, v)?,
                Criterion::Numeric => numeric_holds(joint.as_ref().expect("joint"), r, s, v)?,
            };
            verdicts.push((*c, holds));
        }
        for (i, (_, h)) in verdicts.iter().enumerate() {
            independent[i] += usize::from(*h);
        }
        let get = |c: Criterion| verdicts.iter().find(|(x, _)| *x == c).map(|(_, h)| *h);
        let structural_indep = [Criterion::VnSeparation, Criterion::DSeparation, Criterion::Moralization]
            .into_iter()
            .any(|c| get(c) == Some(true));
        let conflict = get(Criterion::DSeparation) != get(Criterion::Moralization)
            || (get(Criterion::DSeparation) == Some(true) && get(Criterion::VnSeparation) == Some(false))
            || (structural_indep && get(Criterion::Numeric) == Some(false));
        if conflict {
            let detail: Vec<String> = verdicts.iter().map(|(c, h)| format!("{c}={}", c.verdict(*h))).collect();
            disagreements.push(format!(
                "disagreement r={} s={} v={} {}",
                crate::algebra::fmt_set(r),
                crate::algebra::fmt_set(s),
                crate::algebra::fmt_set(v),
                detail.join(" ")
            ));
        }
    }
    let _ = writeln!(out, "triples {}", triples.len());
    for (c, n) in criteria.iter().zip(&independent) {
        let _ = writeln!(out, "{c} independent {n}");
    }
    for d in &disagreements {
        let _ = writeln!(out, "{d}");
    }
    let _ = writeln!(out, "disagreements {}", disagreements.len());
    Ok(disagreements.len())
}
