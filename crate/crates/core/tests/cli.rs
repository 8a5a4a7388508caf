mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ccm::archive::{read_archive, read_phase_archive};
use ccm::classify::CensusSummary;
use ccm::{is_ccm, PhaseMatrix};
use common::data_path;

fn ccm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccm"))
        .current_dir(dir)
        .args(args)
        .env_remove("CCM_GUARD_OVERRIDE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_reports_and_exits() {
    let dir = tempfile::tempdir().unwrap();
    let reps = data_path("classes_4x4.txt");
    let o = ccm(dir.path(), &["verify", reps.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("24/24 CCM\n"));
    assert_eq!(stdout(&o).matches(" normalized ").count(), 24);

    fs::write(dir.path().join("ones.txt"), "4 2 2 00 00\n").unwrap();
    let o = ccm(dir.path(), &["verify", "ones.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("0/1 CCM\n"));

    fs::write(dir.path().join("empty.txt"), "").unwrap();
    let o = ccm(dir.path(), &["verify", "empty.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0/0 CCM\n");

    fs::write(dir.path().join("bad.txt"), "# ok\n4 2 2 00 00\n4 2 2 00 0z\n").unwrap();
    let o = ccm(dir.path(), &["verify", "bad.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn acf_writes_exact_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = ccm(dir.path(), &["acf", "+++++--++-+-+", "-o", "barker.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("barker.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "lag,real,imag");
    assert_eq!(rows.len(), 26);
    assert_eq!(rows[13], "0,13,0");
    assert_eq!(rows[1], "-12,1,0");

    let o = ccm(dir.path(), &["acf", "[[1,1],[1,1],[1,-1],[-1,1]]", "-o", "golay.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("golay.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let expect = if f[0] == "0" { "8" } else { "0" };
        assert_eq!((f[1], f[2]), (expect, "0"), "{line}");
    }

    ccm(dir.path(), &["acf", "4:1", "-o", "one.csv"]);
    assert_eq!(fs::read_to_string(dir.path().join("one.csv")).unwrap(), "lag,real,imag\n0,1,0\n");
}

#[test]
fn search_then_classify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let o = ccm(dir.path(), &["search", "4", "4", "4", "-o", "s.txt", "--summary", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_phase_archive(dir.path().join("s.txt")).unwrap().len(), 231);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(summary["raw"], 231);
    assert!(summary["nodes"].as_u64().unwrap() > 0);
    assert!(summary["wall_seconds"].is_number());

    let o = ccm(dir.path(), &["classify", "s.txt", "--csv", "c.csv", "--witnesses", "w.txt", "--summary", "c.json"]);
    assert_eq!(o.status.code(), Some(0));
    let c: CensusSummary = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(
        (c.classes, c.hadamard, c.dual_pair, c.kronecker, c.concatenation),
        (24, 17, Some(22), 2, 6)
    );
    let witnesses = fs::read_to_string(dir.path().join("w.txt")).unwrap();
    assert_eq!(ccm::classify::check_witness_archive(&witnesses).unwrap(), 24 + 17 + 22 + 2 + 4 + 6);
    assert_eq!(fs::read_to_string(dir.path().join("c.csv")).unwrap().lines().count(), 25);

    let o = ccm(dir.path(), &["search", "4", "2", "4", "-o", "two.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_archive(dir.path().join("two.txt")).unwrap().len(), 36);
    let o = ccm(dir.path(), &["search", "--brute", "4", "2", "4", "-o", "brute.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let pruned = ccm(dir.path(), &["classify", "two.txt", "--csv", "a.csv"]);
    let brute = ccm(dir.path(), &["classify", "brute.txt", "--csv", "b.csv"]);
    assert!(stdout(&brute).contains(" 2 classes"));
    assert_eq!(stdout(&pruned).split_once(',').unwrap().1, stdout(&brute).split_once(',').unwrap().1);
    assert_eq!(
        fs::read_to_string(dir.path().join("a.csv")).unwrap(),
        fs::read_to_string(dir.path().join("b.csv")).unwrap()
    );

    let o = ccm(dir.path(), &["search", "--ternary", "2", "2", "-o", "t.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_archive(dir.path().join("t.txt")).unwrap().len(), 33);
}

#[test]
fn single_matrix_census() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("one.txt"), "4 2 4 0000 0123\n").unwrap();
    let o = ccm(dir.path(), &["classify", "one.txt", "--csv", "c.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap().split(',').take(2).collect::<Vec<_>>(), ["4 2 4 0000 0123", "6144"]);
}

#[test]
fn construct_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("A.txt"), "t 4 4 --00 0000 00-+ 0000\n").unwrap();
    fs::write(d.join("B.txt"), "t 4 4 00-- --++ +-00 +-+-\n").unwrap();
    let o = ccm(d, &["construct", "dual", "A.txt", "B.txt", "-o", "M.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let m = PhaseMatrix::parse_quad("[[-1,-1,-i,-i],[-i,-i,i,i],[i,-i,-1,1],[i,-i,i,-i]]").unwrap();
    assert_eq!(read_phase_archive(d.join("M.txt")).unwrap(), vec![m]);

    // B with a hole breaks the dual-pair condition: a domain failure.
    fs::write(d.join("B0.txt"), "t 4 4 00-- --++ +-00 +-+0\n").unwrap();
    assert_eq!(ccm(d, &["construct", "dual", "A.txt", "B0.txt", "-o", "x.txt"]).status.code(), Some(1));

    fs::write(d.join("g.txt"), "4 2 2 00 02\n").unwrap();
    fs::write(d.join("h.txt"), "4 2 2 00 13\n").unwrap();
    let o = ccm(d, &["construct", "kron", "g.txt", "h.txt", "-o", "k.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let k = read_phase_archive(d.join("k.txt")).unwrap();
    assert_eq!(k[0].shape(), (4, 4));
    assert!(is_ccm(&k[0]));

    fs::write(d.join("tall.txt"), "4 3 2 00 00 00\n").unwrap();
    let o = ccm(d, &["construct", "concat", "g.txt", "tall.txt", "-o", "c.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!d.join("c.txt").exists());
}

#[test]
fn canonical_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = ccm(dir.path(), &["canonical", "[[1,1,1,1],[1,i,-1,-i]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "4 2 4 0000 0123 6144\n");
    let reps = data_path("classes_3x4.txt");
    let o = ccm(dir.path(), &["canonical", reps.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ccm(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(ccm(dir.path(), &["search", "4", "4", "-o", "x"]).status.code(), Some(2));
    assert_eq!(ccm(dir.path(), &["verify", "missing.txt"]).status.code(), Some(2));
    assert_eq!(ccm(dir.path(), &["search", "4", "40", "4", "-o", "x"]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (jobs, tag) in [("1", "a"), ("8", "b")] {
        ccm(d, &["search", "4", "3", "4", "--jobs", jobs, "-o", &format!("{tag}.txt")]);
        ccm(d, &["classify", &format!("{tag}.txt"), "--csv", &format!("{tag}.csv"), "--witnesses", &format!("{tag}.w")]);
    }
    for ext in ["txt", "csv", "w"] {
        assert_eq!(fs::read(d.join(format!("a.{ext}"))).unwrap(), fs::read(d.join(format!("b.{ext}"))).unwrap());
    }
}
