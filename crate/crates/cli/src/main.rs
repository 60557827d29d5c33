use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oscillation::decide::{
    k_emptiness, k_membership, k_witness, language_is_empty, path_to_pda, reachable, Digraph,
};
use oscillation::dyck::{hat_rank, matching_pairs, rank, DyckWord};
use oscillation::grammars::{
    cyk, format_word, is_cnf, parse_trees_for, parse_word, words_up_to, Grammar,
};
use oscillation::kconstruct::{
    annotated_alphabet, k_pda_complete, k_pda_general, k_pda_reduced, push_row_count, union, Rules,
};
use oscillation::pda::{
    cfg_to_pda, enumerate_runs, is_reduced, reduce_pipeline, run_footprint, run_oscillation, Pda,
    QuasiRun,
};
use oscillation::trees::{dimension, footprint, oscillation};

const POSITIVE: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const BOUND_HIT: u8 = 3;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Input(String),
}

#[derive(Parser)]
#[command(
    name = "osc",
    version,
    about = "Oscillation of pushdown runs and parse trees"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Opts {
    /// Move bound for run enumeration.
    #[arg(long, global = true, default_value_t = 40)]
    max_moves: usize,
    /// Longest word tried when enumerating inputs.
    #[arg(long, global = true, default_value_t = 6)]
    max_len: usize,
    /// Print a witnessing run when one is found.
    #[arg(long, global = true)]
    witness: bool,
    /// One `key=value` record per line.
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank, hat rank and matching pairs of a parenthesis word.
    Rank { word: String },
    /// Parse trees of a word with their dimension and oscillation.
    Tree {
        grammar: PathBuf,
        word: String,
        /// Largest tree considered.
        #[arg(long, default_value_t = 40)]
        max_nodes: usize,
    },
    /// Oscillations of the runs on a word, or on every word up to --max-len.
    RunOsc { pda: PathBuf, word: Option<String> },
    /// Translate a grammar into a single-state automaton.
    Cfg2pda { grammar: PathBuf },
    /// Bring an automaton into reduced form.
    Reduce { pda: PathBuf },
    /// Build the automaton whose runs are exactly the k-oscillating ones.
    Construct {
        pda: PathBuf,
        #[arg(short)]
        k: usize,
        /// Use the construction for arbitrary automata, without reducing.
        #[arg(long, conflicts_with = "complete")]
        general: bool,
        /// Use the completed case table.
        #[arg(long)]
        complete: bool,
    },
    /// Whether some run has oscillation k.
    Empty {
        pda: PathBuf,
        #[arg(short)]
        k: usize,
        /// Ask for oscillation at most k instead of exactly k.
        #[arg(long)]
        at_most: bool,
    },
    /// Whether a word is accepted by a run of oscillation k.
    Member {
        pda: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        w: String,
        /// Ask for oscillation at most k instead of exactly k.
        #[arg(long)]
        at_most: bool,
    },
    /// Union of two automata.
    Union { left: PathBuf, right: PathBuf },
    /// Reachability in a graph through the emptiness of an automaton.
    Path {
        graph: PathBuf,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
        /// Print the automaton instead of the verdict.
        #[arg(long)]
        emit: bool,
    },
}

/// Collects output so human and machine modes share one code path.
struct Out {
    machine: bool,
}

impl Out {
    fn kv(&self, key: &str, value: impl Display) {
        if self.machine {
            println!("{key}={value}");
        } else {
            println!("{key}: {value}");
        }
    }

    fn human(&self, text: impl Display) {
        if !self.machine {
            println!("{text}");
        }
    }

    fn verdict(&self, word: &str) {
        if self.machine {
            println!("verdict={word}");
        } else {
            println!("{word}");
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path) -> Result<T, CliError>
where
    T: std::str::FromStr,
    T::Err: Display,
{
    read(path)?.parse().map_err(|e: T::Err| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Loads an automaton and reduces it when needed, saying so on stderr.
fn load_reduced(path: &Path) -> Result<Pda, CliError> {
    let p: Pda = load(path)?;
    if is_reduced(&p) {
        return Ok(p);
    }
    eprintln!(
        "note: {} is not in reduced form; reducing it first",
        path.display()
    );
    Ok(reduce_pipeline(&p))
}

fn show_run(out: &Out, label: &str, r: &QuasiRun) {
    out.kv(&format!("{label}.word"), format_word(&r.consumed()));
    out.kv(&format!("{label}.oscillation"), run_oscillation(r));
    out.kv(&format!("{label}.footprint"), run_footprint(r));
    out.human(r);
}

fn cmd_rank(out: &Out, word: &str) -> Result<u8, CliError> {
    let w: DyckWord = word
        .parse()
        .map_err(|e| CliError::Input(format!("{word:?}: {e}")))?;
    out.kv("word", &w);
    out.kv("rank", rank(&w));
    out.kv("hat_rank", hat_rank(&w));
    let pairs: Vec<String> = matching_pairs(&w)
        .pairs()
        .iter()
        .map(|(i, j)| format!("({i},{j})"))
        .collect();
    out.kv("pairs", pairs.join(" "));
    out.human(w.arc_diagram());
    Ok(POSITIVE)
}

fn cmd_tree(out: &Out, path: &Path, word: &str, max_nodes: usize) -> Result<u8, CliError> {
    let g: Grammar = load(path)?;
    let w = parse_word(word);
    if is_cnf(&g) && !w.is_empty() && !cyk(&g, &w).expect("checked CNF") {
        out.verdict("NOT-IN-LANGUAGE");
        return Ok(NEGATIVE);
    }
    let trees = parse_trees_for(&g, &w, max_nodes);
    if trees.is_empty() {
        out.verdict("NOT-IN-LANGUAGE");
        out.human(format!("(no parse tree with at most {max_nodes} nodes)"));
        return Ok(NEGATIVE);
    }
    let mut violations = 0;
    for (i, t) in trees.iter().enumerate() {
        let (d, o) = (dimension(t), oscillation(t));
        let ok = o <= d + 1 && d <= 2 * o;
        violations += usize::from(!ok);
        let tag = format!("tree{}", i + 1);
        out.kv(&format!("{tag}.dimension"), d);
        out.kv(&format!("{tag}.oscillation"), o);
        out.kv(&format!("{tag}.footprint"), footprint(t));
        out.kv(&format!("{tag}.bounds"), if ok { "ok" } else { "VIOLATED" });
        out.human(t);
    }
    out.kv("trees", trees.len());
    Ok(if violations == 0 { POSITIVE } else { NEGATIVE })
}

fn cmd_run_osc(out: &Out, opts: Opts, path: &Path, word: Option<&str>) -> Result<u8, CliError> {
    let p: Pda = load(path)?;
    let words = match word {
        Some(w) => vec![parse_word(w)],
        None => {
            let sigma: Vec<String> = p.input_alphabet.iter().cloned().collect();
            words_up_to(&sigma, opts.max_len)
        }
    };
    let mut any = false;
    let mut cut = false;
    for w in &words {
        let set =
            enumerate_runs(&p, w, opts.max_moves).map_err(|e| CliError::Input(e.to_string()))?;
        cut |= set.bound_hit;
        if set.runs.is_empty() && word.is_none() {
            continue;
        }
        any |= !set.runs.is_empty();
        let oscs: BTreeSet<usize> = set.runs.iter().map(run_oscillation).collect();
        let shown: Vec<String> = oscs.iter().map(ToString::to_string).collect();
        out.kv(
            &format!("osc[{}]", format_word(w)),
            format!("{{{}}}", shown.join(",")),
        );
        if word.is_some() {
            for (i, r) in set.runs.iter().enumerate() {
                show_run(out, &format!("run{}", i + 1), r);
            }
        }
    }
    if cut {
        eprintln!(
            "warning: the move bound {} cut the search; results may be incomplete",
            opts.max_moves
        );
    }
    Ok(match (any, cut) {
        (true, _) => POSITIVE,
        (false, true) => BOUND_HIT,
        (false, false) => NEGATIVE,
    })
}

fn cmd_construct(
    out: &Out,
    path: &Path,
    k: usize,
    general: bool,
    complete: bool,
) -> Result<u8, CliError> {
    if general {
        let p: Pda = load(path)?;
        let pk = k_pda_general(&p, k);
        println!(
            "# {} actions, {} stack symbols",
            pk.actions.len(),
            pk.stack_alphabet.len()
        );
        print!("{pk}");
        return Ok(POSITIVE);
    }
    let p = load_reduced(path)?;
    let rules = if complete {
        Rules::Completed
    } else {
        Rules::Printed
    };
    let pk = if complete {
        k_pda_complete(&p, k)
    } else {
        k_pda_reduced(&p, k)
    }
    .expect("reduced input");
    let pops = p.pop_actions().count();
    let pushes = p.push_actions().count();
    let expected = 2 * pops + push_row_count(rules, k) * pushes;
    let alphabet = annotated_alphabet(&p.stack_alphabet, k, rules).len();
    if out.machine {
        out.kv("actions", pk.actions.len());
        out.kv("expected_actions", expected);
        out.kv("symbols", pk.stack_alphabet.len());
        out.kv("expected_symbols", alphabet);
    } else {
        println!(
            "# {} actions (expected {expected}), {} stack symbols (expected {alphabet})",
            pk.actions.len(),
            pk.stack_alphabet.len()
        );
        print!("{pk}");
    }
    Ok(POSITIVE)
}

fn levels(k: usize, at_most: bool) -> std::ops::RangeInclusive<usize> {
    if at_most {
        0..=k
    } else {
        k..=k
    }
}

fn cmd_empty(out: &Out, opts: Opts, path: &Path, k: usize, at_most: bool) -> Result<u8, CliError> {
    let p = load_reduced(path)?;
    let hit = levels(k, at_most).find(|&j| k_emptiness(&p, j).expect("reduced"));
    match hit {
        Some(j) => {
            out.verdict("NONEMPTY");
            out.kv("level", j);
            if opts.witness {
                let r = k_witness(&p, j)
                    .expect("reduced")
                    .expect("nonempty level has a witness");
                show_run(out, "witness", &r);
            }
            Ok(POSITIVE)
        }
        None => {
            out.verdict("EMPTY");
            Ok(NEGATIVE)
        }
    }
}

fn cmd_member(
    out: &Out,
    opts: Opts,
    path: &Path,
    k: usize,
    word: &str,
    at_most: bool,
) -> Result<u8, CliError> {
    let p = load_reduced(path)?;
    let w = parse_word(word);
    let hit = levels(k, at_most).find(|&j| k_membership(&p, j, &w).expect("reduced"));
    let Some(j) = hit else {
        out.verdict("NONMEMBER");
        return Ok(NEGATIVE);
    };
    out.verdict("MEMBER");
    out.kv("level", j);
    if opts.witness {
        let set =
            enumerate_runs(&p, &w, opts.max_moves).map_err(|e| CliError::Input(e.to_string()))?;
        match set.runs.iter().find(|r| run_oscillation(r) == j) {
            Some(r) => show_run(out, "witness", r),
            None => {
                eprintln!("warning: no witnessing run within {} moves", opts.max_moves);
                return Ok(BOUND_HIT);
            }
        }
    }
    Ok(POSITIVE)
}

fn cmd_path(
    out: &Out,
    path: &Path,
    source: Option<String>,
    target: Option<String>,
    emit: bool,
) -> Result<u8, CliError> {
    let g: Digraph = load(path)?;
    let (s, t) = match (source, target) {
        (Some(s), Some(t)) => (s, t),
        (s, t) => {
            let (ds, dt) = g.endpoints().map_err(|e| CliError::Input(e.to_string()))?;
            (
                s.unwrap_or_else(|| ds.to_string()),
                t.unwrap_or_else(|| dt.to_string()),
            )
        }
    };
    let p = path_to_pda(&g, &s, &t);
    if emit {
        print!("{p}");
        return Ok(POSITIVE);
    }
    let nonempty = !language_is_empty(&reduce_pipeline(&p));
    debug_assert_eq!(nonempty, reachable(&g, &s, &t));
    out.verdict(if nonempty { "REACHABLE" } else { "UNREACHABLE" });
    Ok(if nonempty { POSITIVE } else { NEGATIVE })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let out = Out {
        machine: cli.opts.machine,
    };
    let opts = cli.opts;
    match cli.cmd {
        Cmd::Rank { word } => cmd_rank(&out, &word),
        Cmd::Tree {
            grammar,
            word,
            max_nodes,
        } => cmd_tree(&out, &grammar, &word, max_nodes),
        Cmd::RunOsc { pda, word } => cmd_run_osc(&out, opts, &pda, word.as_deref()),
        Cmd::Cfg2pda { grammar } => {
            let g: Grammar = load(&grammar)?;
            print!("{}", cfg_to_pda(&g));
            Ok(POSITIVE)
        }
        Cmd::Reduce { pda } => {
            let p: Pda = load(&pda)?;
            print!("{}", reduce_pipeline(&p));
            Ok(POSITIVE)
        }
        Cmd::Construct {
            pda,
            k,
            general,
            complete,
        } => cmd_construct(&out, &pda, k, general, complete),
        Cmd::Empty { pda, k, at_most } => cmd_empty(&out, opts, &pda, k, at_most),
        Cmd::Member { pda, k, w, at_most } => cmd_member(&out, opts, &pda, k, &w, at_most),
        Cmd::Union { left, right } => {
            let u = union(&load_reduced(&left)?, &load_reduced(&right)?).expect("both reduced");
            print!("{u}");
            Ok(POSITIVE)
        }
        Cmd::Path {
            graph,
            source,
            target,
            emit,
        } => cmd_path(&out, &graph, source, target, emit),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
