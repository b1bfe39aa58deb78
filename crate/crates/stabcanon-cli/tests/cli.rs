use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stabcanon"));
    c.env_remove("STABCANON_THREADS");
    c
}

fn file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stabcanon-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_examples() {
    let a = file("va.txt", "QUBITS 2\nP 0\n");
    let b = file("vb.txt", "QUBITS 2\nZ 0\n");
    assert_eq!(code(&run(&["verify", path(&a), path(&a)])), 0);
    assert_eq!(code(&run(&["verify", path(&a), path(&b)])), 1);
    let cz = file("cz.txt", "QUBITS 2\nCZ 0 1\n");
    let hch = file("hch.txt", "QUBITS 2\nH 1\nCX 0 1\nH 1\n");
    assert_eq!(code(&run(&["verify", path(&cz), path(&hch)])), 0);
    assert_eq!(code(&run(&["verify", "--exact", path(&cz), path(&hch)])), 0);
    let three = file("three.txt", "QUBITS 3\n");
    assert_eq!(code(&run(&["verify", path(&a), path(&three)])), 2);
    let six = file("six.txt", "QUBITS 6\n");
    assert_eq!(code(&run(&["verify", "--exact", path(&six), path(&six)])), 2);
}

#[test]
fn parse_errors_exit_2() {
    let bad = file("bad.txt", "QUBITS 2\nFOO 1\n");
    let o = run(&["depth", path(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&run(&["canonicalize", path(&bad)])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn depth_examples() {
    let one = file("one.txt", "QUBITS 2\nCX 0 1\n");
    let o = run(&["depth", path(&one)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("two-qubit depth: 1\n"));
    let far = file("far.txt", "QUBITS 3\nCX 0 2\n");
    let o = run(&["depth", "--layout", "lnn", path(&far)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("layout lnn: invalid"));

    let fig = run(&["gen", "--kind", "czhat", "--qubits", "7", "--seed", "5"]);
    assert_eq!(code(&fig), 0);
    let fig = file("fig.txt", &stdout(&fig));
    let o = run(&["depth", "--layout", "lnn", path(&fig)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("two-qubit depth: 16\n"));
    assert!(stdout(&o).contains("layout lnn: valid"));
}

#[test]
fn canonicalize_empty() {
    let empty = file("empty.txt", "QUBITS 3\n");
    let o = run(&["canonicalize", "--stages", "--lnn", path(&empty)]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("# lnn two-qubit depth: 0"));
    assert!(out.contains("N: 3\nH:\nC: 100 010 001\nCZ:\nP:\nH:\nP:\nCZ:\nC: 100 010 001\nQUBITS 3\n"));
}

#[test]
fn canonicalize_round_trips_through_verify() {
    for seed in 0..5 {
        let g = run(&["gen", "--qubits", "8", "--gates", "200", "--seed", &seed.to_string()]);
        let input = file(&format!("in{seed}.txt"), &stdout(&g));
        let o = run(&["canonicalize", path(&input)]);
        assert_eq!(code(&o), 0);
        let out = stdout(&o);
        let depth: usize = out
            .lines()
            .find_map(|l| l.strip_prefix("# lnn two-qubit depth: "))
            .unwrap()
            .parse()
            .unwrap();
        assert!(depth <= 108);
        let lnn = file(&format!("out{seed}.txt"), &out);
        assert_eq!(code(&run(&["verify", path(&input), path(&lnn)])), 0);
        let o = run(&["depth", "--layout", "lnn", path(&lnn)]);
        assert_eq!(code(&o), 0);
    }
}

#[test]
fn canonicalize_writes_output_file() {
    let g = run(&["gen", "--qubits", "4", "--gates", "40", "--seed", "11"]);
    let input = file("w_in.txt", &stdout(&g));
    let dest = input.with_file_name("w_out.txt");
    let o = run(&["canonicalize", "--stages", "-o", path(&dest), path(&input)]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&dest).unwrap();
    assert!(text.starts_with("N: 4\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn stage_report_for_pc_circuit() {
    let g = run(&["gen", "--kind", "pc", "--qubits", "5", "--gates", "3", "--seed", "2"]);
    let input = file("pc.txt", &stdout(&g));
    let o = run(&["canonicalize", "--stages", path(&input)]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for l in out.lines().filter(|l| l.starts_with("# stage")) {
        if l.contains(" H:") {
            assert!(l.ends_with("gates 0 two-qubit 0"), "{l}");
        }
    }
    for order in ["pczc", "cpcz", "czpc", "cczp"] {
        let o = run(&["canonicalize", "--order", order, path(&input)]);
        assert_eq!(code(&o), 0);
        let c = file(&format!("pc_{order}.txt"), &stdout(&o));
        assert_eq!(code(&run(&["verify", "--exact", path(&input), path(&c)])), 0);
    }
    let h = file("h.txt", "QUBITS 2\nH 0\n");
    assert_eq!(code(&run(&["canonicalize", "--order", "pczc", path(&h)])), 2);
    assert_eq!(code(&run(&["canonicalize", "--order", "zzzz", path(&h)])), 2);
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&run(&["gen", "--qubits", "6", "--seed", "42"]));
    let b = stdout(&run(&["gen", "--qubits", "6", "--seed", "42"]));
    let c = stdout(&run(&["gen", "--qubits", "6", "--seed", "43"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("QUBITS 6\n"));
    assert_eq!(a.lines().count(), 101);
    assert_eq!(code(&run(&["gen", "--qubits", "0"])), 2);
}

#[test]
fn table1_small() {
    let o = run(&["table1", "--max-n", "3", "--csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "n,cz_czonly,cz_mixed,c_cnotonly,c_mixed\n2,1,1,3,3\n3,3,3,6,6\n");
    let o = bin().args(["table1", "--max-n", "3"]).env("STABCANON_THREADS", "2").output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit())).count(), 2);
    assert_eq!(code(&run(&["table1", "--max-n", "9"])), 2);
}

#[test]
fn table1_full() {
    let o = run(&["table1", "--csv", "--threads", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "n,cz_czonly,cz_mixed,c_cnotonly,c_mixed\n2,1,1,3,3\n3,3,3,6,6\n4,6,5,9,9\n5,10,7,12,12\n");
}
