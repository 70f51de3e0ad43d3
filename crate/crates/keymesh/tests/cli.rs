use std::fs;
use std::io::BufReader;
use std::process::{Command, Output};

use keymesh::edgelist::read_edge_list;
use keymesh::figures::Figure;

fn keymesh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keymesh")).args(args).env("KEYMESH_THREADS", "2").output().expect("spawn keymesh")
}

fn keymesh_line(line: &str) -> Output {
    keymesh(&line.split_whitespace().collect::<Vec<_>>())
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn pq_prints_bare_value() {
    assert_eq!(stdout(&keymesh(&["pq", "--K", "2", "--P", "4", "--q", "1"])), "0.8333333333\n");
    assert_eq!(stdout(&keymesh(&["pq", "--K", "2", "--P", "4", "--q", "2"])), "0.1666666667\n");
}

#[test]
fn exit_codes() {
    assert_eq!(keymesh(&["--help"]).status.code(), Some(0));
    assert_eq!(keymesh(&["--version"]).status.code(), Some(0));
    assert_eq!(keymesh(&["nonsense"]).status.code(), Some(1));
    assert_eq!(keymesh(&["pq", "--K", "5", "--P", "4"]).status.code(), Some(1));
    // Link activity without unreliable links is rejected.
    let bad = keymesh(&["connectivity", "--n", "50", "--K", "5", "--P", "50", "--r", "0.2", "--t", "0.5"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
    assert_eq!(
        keymesh(&["resilience", "--region", "full", "--n", "50", "--K", "5", "--P", "50"]).status.code(),
        Some(1)
    );
    assert_eq!(keymesh(&["fig", "con9"]).status.code(), Some(1));
    assert_eq!(keymesh(&["selftest"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# small torus run\nn = 200\nK = 12\nP = 300\nq = 1\nr = 0.2\ntrials = 30\nseed = 4\nsweep = K\nvalues = 8,12\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&keymesh(&["connectivity", "--config", cfg]));
    let lines: Vec<&str> = from_file.lines().collect();
    assert_eq!(lines[0], "K,estimate,ci_low,ci_high,trials,isolated_mean,components_mean");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("8,") && lines[2].starts_with("12,"));

    let explicit = stdout(&keymesh_line(
        "connectivity --n 200 --K 12 --P 300 --r 0.2 --trials 30 --seed 4 --sweep K --values 8,12",
    ));
    assert_eq!(from_file, explicit);

    let overridden = stdout(&keymesh(&["connectivity", "--config", cfg, "--range", "10:14:2"]));
    let values: Vec<&str> = overridden.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(values, ["10", "12", "14"]);
}

#[test]
fn out_file_and_graph_dump() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let graph = dir.path().join("g.txt");
    let line = format!(
        "connectivity --n 150 --K 10 --P 200 --r 0.25 --trials 5 --out {} --dump-graph {}",
        csv.display(),
        graph.display()
    );
    let out = keymesh_line(&line);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
    let g = read_edge_list(BufReader::new(fs::File::open(&graph).unwrap())).unwrap();
    assert_eq!(g.n(), 150);
}

#[test]
fn split_never_crosses_on_square() {
    let text = stdout(&keymesh(&["split", "--n", "1000", "--r", "0.05", "--ell", "0.4", "--trials", "10"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,captured,chunk_low,chunk_high,cross_edges"));
    for line in lines {
        assert!(line.ends_with(",0"), "{line}");
    }
    // The torus seam band does not fit when ell + 3r >= 1.
    assert_eq!(
        keymesh(&["split", "--n", "100", "--r", "0.2", "--ell", "0.5", "--region", "torus"]).status.code(),
        Some(1)
    );
}

#[test]
fn design_reports_one_row() {
    let text = stdout(&keymesh(&["design", "--n", "100000", "--q", "2", "--c", "2"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "K,P,r,capped,achieved_c,margin");
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].split(',').count(), 6);
}

#[test]
fn figure_headers() {
    for (fig, range) in [
        (Figure::Con1, "30:30:1"),
        (Figure::Con2, "30:30:1"),
        (Figure::Mobility, "1:2:1"),
        (Figure::Res, "1:2:1"),
        (Figure::Res2, "1:2:1"),
        (Figure::Res3, "5:5:5"),
    ] {
        let text = stdout(&keymesh(&["fig", fig.name(), "--trials", "3", "--range", range]));
        let header = text.lines().next().unwrap();
        assert_eq!(header, fig.header().join(","), "{}", fig.name());
        let cols = fig.header().len();
        for row in text.lines().skip(1) {
            assert_eq!(row.split(',').count(), cols, "{}: {row}", fig.name());
        }
    }
}

#[test]
fn resilience_output_is_a_probability() {
    let text = stdout(&keymesh_line("resilience --region full --n 200 --K 20 --P 500 --q 2 --m 10 --trials 20"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let est: f64 = row[1].parse().unwrap();
    assert!((0.0..=1.0).contains(&est));
    let (lo, hi): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
    assert!(lo <= est && est <= hi);
}
