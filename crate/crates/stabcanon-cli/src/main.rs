use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stabcanon::circuit::{two_qubit_depth, validate_layout};
use stabcanon::generate::{generate, GenKind};
use stabcanon::linear::LinearBackend;
use stabcanon::oracle::{dense_unitary, table1_report, unitary_equal, PhaseMode};
use stabcanon::phasepoly::{extract, fold, reexpress, StageOrder};
use stabcanon::pipeline::{canonicalize, lnn_depth_bound};
use stabcanon::tableau::{circuit_to_tableau, tableau_equal};
use stabcanon::{Circuit, Error, Layout};

const EXACT_MAX_N: usize = 5;

#[derive(Parser)]
#[command(name = "stabcanon", version, about = "Canonical forms and line layouts for stabilizer circuits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a circuit as -H-C-CZ-P-H-P-CZ-C- and lay it out on a line.
    Canonicalize {
        /// Circuit file, or `-` for stdin.
        input: PathBuf,
        /// Emit the 8-stage form.
        #[arg(long)]
        stages: bool,
        /// Emit the line circuit (the default when nothing else is selected).
        #[arg(long)]
        lnn: bool,
        /// For Hadamard-free input: emit the folded circuit with its stages in this order.
        #[arg(long, value_parser = parse_order)]
        order: Option<StageOrder>,
        /// Write the artifacts here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exit 0 iff the two circuits implement the same Clifford.
    Verify {
        a: PathBuf,
        b: PathBuf,
        /// Also compare dense unitaries up to global phase (at most 5 qubits).
        #[arg(long)]
        exact: bool,
    },
    /// Two-qubit depth and layout validity.
    Depth {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = LayoutArg::All)]
        layout: LayoutArg,
    },
    /// Worst-case two-qubit counts by exhaustive search.
    Table1 {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long)]
        csv: bool,
        #[arg(long, env = "STABCANON_THREADS", default_value_t = 1)]
        threads: usize,
    },
    /// Seeded random circuits.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        qubits: usize,
        /// Word length (clifford) or number of -P-C- rounds (pc).
        #[arg(long, default_value_t = 100)]
        gates: usize,
        #[arg(long, default_value = "clifford", value_parser = parse_kind)]
        kind: GenKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Lnn,
    All,
}

fn parse_order(s: &str) -> Result<StageOrder, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<GenKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Exit status 1 with a message, or a library error (status 2).
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Internal(_) => Failure::Check(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    read_text(path)?.parse().map_err(|e: Error| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> CmdResult {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

const STAGE_NAMES: [&str; 8] = ["H", "C", "CZ", "P", "H", "P", "CZ", "C"];

fn cmd_canonicalize(input: &Path, stages: bool, lnn: bool, order: Option<StageOrder>, output: Option<&Path>) -> CmdResult {
    let c = read_circuit(input)?;
    let n = c.n;
    println!("# qubits: {n}");
    if let Some(order) = order {
        let (p, g) = extract(&c)?;
        let backend = if lnn { LinearBackend::Lnn } else { LinearBackend::Gauss };
        let out = reexpress(&fold(&p), &g, order, backend)?;
        println!("# order: {}", format!("{order:?}").to_lowercase());
        println!("# gates: {} two-qubit: {} depth: {}", out.len(), out.two_qubit_count(), two_qubit_depth(&out));
        return emit(&out.to_string(), output);
    }
    let (form, line) = canonicalize(&c)?;
    for (i, (name, sc)) in STAGE_NAMES.iter().zip(form.stage_circuits(LinearBackend::Gauss)?).enumerate() {
        println!("# stage {i} {name}: gates {} two-qubit {}", sc.len(), sc.two_qubit_count());
    }
    let depth = two_qubit_depth(&line);
    let bound = lnn_depth_bound(n);
    let ok = depth <= bound && validate_layout(&line, Layout::Lnn);
    println!("# lnn gates: {} two-qubit: {}", line.len(), line.two_qubit_count());
    println!("# lnn two-qubit depth: {depth}");
    println!("# bound 14n-4: {bound} {}", if ok { "ok" } else { "VIOLATED" });
    let mut text = String::new();
    if stages {
        text.push_str(&form.dump());
    }
    if lnn || !stages {
        text.push_str(&line.to_string());
    }
    emit(&text, output)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("depth bound violated".into()))
    }
}

fn cmd_verify(a: &Path, b: &Path, exact: bool) -> CmdResult {
    let (ca, cb) = (read_circuit(a)?, read_circuit(b)?);
    if ca.n != cb.n {
        return Err(Failure::Usage(format!("qubit counts differ: {} vs {}", ca.n, cb.n)));
    }
    if exact && ca.n > EXACT_MAX_N {
        return Err(Failure::Usage(format!("--exact supports at most {EXACT_MAX_N} qubits")));
    }
    if !tableau_equal(&circuit_to_tableau(&ca)?, &circuit_to_tableau(&cb)?)? {
        println!("tableau: different");
        return Err(Failure::Check("circuits differ".into()));
    }
    println!("tableau: equal");
    if exact {
        if !unitary_equal(&dense_unitary(&ca)?, &dense_unitary(&cb)?, PhaseMode::UpToGlobalPhase)? {
            println!("unitary: different");
            return Err(Failure::Check("unitaries differ".into()));
        }
        println!("unitary: equal up to global phase");
    }
    Ok(())
}

fn cmd_depth(input: &Path, layout: LayoutArg) -> CmdResult {
    let c = read_circuit(input)?;
    let (layout, name) = match layout {
        LayoutArg::Lnn => (Layout::Lnn, "lnn"),
        LayoutArg::All => (Layout::AllToAll, "all"),
    };
    let valid = validate_layout(&c, layout);
    println!("qubits: {}", c.n);
    println!("two-qubit gates: {}", c.two_qubit_count());
    println!("two-qubit depth: {}", two_qubit_depth(&c));
    println!("layout {name}: {}", if valid { "valid" } else { "invalid" });
    if valid {
        Ok(())
    } else {
        Err(Failure::Check("layout violated".into()))
    }
}

fn cmd_table1(max_n: usize, csv: bool, threads: usize) -> CmdResult {
    let table = table1_report(max_n, threads.max(1))?;
    print!("{}", if csv { table.to_csv() } else { table.to_ascii() });
    let bad = table.mismatches();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(bad.join("; ")))
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Canonicalize { input, stages, lnn, order, output } => {
            cmd_canonicalize(&input, stages, lnn, order, output.as_deref())
        }
        Cmd::Verify { a, b, exact } => cmd_verify(&a, &b, exact),
        Cmd::Depth { input, layout } => cmd_depth(&input, layout),
        Cmd::Table1 { max_n, csv, threads } => cmd_table1(max_n, csv, threads),
        Cmd::Gen { seed, qubits, gates, kind } => {
            print!("{}", generate(kind, qubits, gates, seed)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("stabcanon: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
