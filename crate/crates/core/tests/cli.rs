use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("smallcut-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.0.join(name);
        fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn smallcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallcut"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_graph(n: usize) -> String {
    let mut s = format!("{n} {}\n", n - 1);
    for v in 1..n {
        s += &format!("{} {v}\n", v - 1);
    }
    s
}

const STAR: &str = "5 4\n0 1\n0 2\n0 3\n0 4\n";
const TRIANGLE: &str = "3 3\n0 1\n0 2\n1 2\n";

#[test]
fn solve_path_prefix_and_verify_certificate() {
    let dir = Scratch::new("path");
    let g = dir.file("p10.txt", &path_graph(10));
    let cert = dir.path("cert.txt");
    let o = smallcut(&[
        "solve",
        &g,
        "--variant",
        "vertex",
        "--k",
        "3",
        "--t",
        "1",
        "--out",
        &cert,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("verdict: YES"), "{out}");
    let summary = out.lines().last().unwrap();
    assert!(summary.starts_with(
        "RESULT verdict=YES algorithm=important-separators variant=vertex n=10 m=9 k=3 t=1"
    ));
    assert!(summary.contains(" cut=1 "), "{summary}");
    assert!(stderr(&o).starts_with("time: "));

    let inst = dir.file("p10.inst", &format!("# k=3\n# t=1\n{}", path_graph(10)));
    let v = smallcut(&["verify", &inst, &cert]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    assert!(stdout(&v).starts_with("valid"));
}

#[test]
fn solve_terminal_star() {
    let dir = Scratch::new("star");
    let g = dir.file("star.txt", STAR);
    let o = smallcut(&[
        "solve",
        &g,
        "--variant",
        "vertex-terminal",
        "--k",
        "2",
        "--t",
        "3",
        "--terminal",
        "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(
        out.contains("RESULT verdict=YES algorithm=colorcoding variant=vertex-terminal"),
        "{out}"
    );
    assert!(out.contains("mode=derandomized"), "{out}");
}

#[test]
fn solve_reads_parameters_from_instance_file() {
    let dir = Scratch::new("params");
    let inst = dir.file(
        "i.txt",
        &format!("# variant=exact-k\n# k=2\n# t=1\n{}", path_graph(4)),
    );
    let o = smallcut(&["solve", &inst]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("RESULT verdict=YES algorithm=bruteforce variant=exact-k"));
    let o = smallcut(&["solve", &inst, "--t", "0"]);
    assert!(stdout(&o).contains("RESULT verdict=NO"));
}

#[test]
fn exact_k_rejects_color_coding() {
    let dir = Scratch::new("exact");
    let g = dir.file("p4.txt", &path_graph(4));
    let o = smallcut(&[
        "solve",
        &g,
        "--variant",
        "exact-k",
        "--k",
        "2",
        "--t",
        "1",
        "--algorithm",
        "colorcoding",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("unsupported combination"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn missing_terminal_and_bad_input() {
    let dir = Scratch::new("bad");
    let g = dir.file("star.txt", STAR);
    let o = smallcut(&[
        "solve",
        &g,
        "--variant",
        "edge-terminal",
        "--k",
        "2",
        "--t",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires a terminal"), "{}", stderr(&o));
    let loop_file = dir.file("loop.txt", "2 1\n0 0\n");
    let o = smallcut(&["solve", &loop_file, "--k", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2: self-loop"), "{}", stderr(&o));
}

#[test]
fn verify_reports_reasons() {
    let dir = Scratch::new("verify");
    let inst = dir.file(
        "i.txt",
        &format!("# variant=vertex-terminal\n# k=2\n# t=1\n# terminal=0\n{STAR}"),
    );
    let too_big = dir.file("a.txt", "0\n1\n");
    let o = smallcut(&["verify", &inst, &too_big]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("boundary too large"), "{}", stdout(&o));
    let no_terminal = dir.file("b.txt", "1\n");
    let o = smallcut(&["verify", &inst, &no_terminal]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("terminal 0 missing"), "{}", stdout(&o));
    let out_of_range = dir.file("c.txt", "0\n9\n");
    assert_eq!(
        smallcut(&["verify", &inst, &out_of_range]).status.code(),
        Some(1)
    );
    let garbage = dir.file("d.txt", "zero\n");
    assert_eq!(
        smallcut(&["verify", &inst, &garbage]).status.code(),
        Some(2)
    );
}

#[test]
fn reduce_examples() {
    let dir = Scratch::new("reduce");
    let k3 = dir.file("k3.txt", TRIANGLE);
    let o = smallcut(&["reduce", &k3, "--thm", "2", "--k", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.starts_with("# variant=vertex\n# k=3\n# t=3\n"),
        "{text}"
    );
    assert!(text.contains("# vertex 27: he edge 0\n"));

    let out = dir.path("k3-thm4.txt");
    let o = smallcut(&["reduce", &k3, "--thm", "4", "--k", "2", "--out", &out]);
    assert!(
        stdout(&o).starts_with("RESULT reduce selector=4 n=7 m=9 variant=vertex-terminal k=4 t=2")
    );
    let solved = smallcut(&["solve", &out]);
    assert!(
        stdout(&solved).contains("RESULT verdict=YES"),
        "{}",
        stdout(&solved)
    );

    let p3 = dir.file("p3.txt", &path_graph(3));
    let o = smallcut(&["reduce", &p3, "--thm", "5", "--k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not regular"));
}

#[test]
fn reduced_instances_round_trip_through_solve_and_verify() {
    let dir = Scratch::new("roundtrip");
    let c4 = dir.file("c4.txt", "4 4\n0 1\n1 2\n2 3\n0 3\n");
    let inst = dir.path("c4-thm5.txt");
    assert!(
        smallcut(&["reduce", &c4, "--thm", "5", "--k", "2", "--out", &inst])
            .status
            .success()
    );
    let cert = dir.path("cert.txt");
    let o = smallcut(&["solve", &inst, "--algorithm", "bruteforce", "--out", &cert]);
    assert!(stdout(&o).contains("RESULT verdict=YES"), "{}", stdout(&o));
    assert_eq!(smallcut(&["verify", &inst, &cert]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical() {
    let dir = Scratch::new("determinism");
    let g = dir.file("star.txt", STAR);
    let args = [
        "solve",
        &g,
        "--variant",
        "edge-terminal",
        "--k",
        "3",
        "--t",
        "2",
        "--terminal",
        "1",
        "--trials",
        "40",
        "--seed",
        "9",
    ];
    let (a, b) = (smallcut(&args), smallcut(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("mode=randomized seed=9 trials=40 error_bound="));
}

#[test]
fn selftest_quick_sweep_and_negative_control() {
    let o = smallcut(&["selftest", "--n-max", "8", "--instances", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status=PASS"));
    let o = smallcut(&[
        "selftest",
        "--n-max",
        "6",
        "--instances",
        "40",
        "--inject-fault",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("FAIL by-t solver vs oracle"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn thread_count_from_environment() {
    let dir = Scratch::new("threads");
    let g = dir.file("p10.txt", &path_graph(10));
    let args = ["solve", &g, "--k", "4", "--t", "1"];
    let one = Command::new(env!("CARGO_BIN_EXE_smallcut"))
        .args(args)
        .env("SMALLCUT_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_smallcut"))
        .args(args)
        .env("SMALLCUT_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}
