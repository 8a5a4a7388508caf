use std::process::Command;

/// (example, args, a line its output must contain)
const RUNS: &[(&str, &[&str], &str)] = &[
    ("autocorrelation", &[], "x1 + x2: [0, 0, 0, 8, 0, 0, 0]"),
    ("gramian", &[], "is_ccm: true"),
    ("symmetry", &[], "canonical: 4 4 4 0000 0001 2230 0202"),
    ("search", &["4", "3", "4"], "5 equivalence classes"),
    ("census", &["2", "3", "4"], "4x4     231       24        17    22       2(4)       6"),
    ("dual_pair", &[], "A + iB == M: true"),
    ("constructions", &[], "G (x) G = 4 4 4 0000 0202 0022 0220  ccm true"),
];

#[test]
fn every_example_runs() {
    for (name, args, needle) in RUNS {
        let out = Command::new(env!("CARGO"))
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .args(["run", "--quiet", "--example", name, "--"])
            .args(*args)
            .output()
            .unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(text.contains(needle), "{name} output lacks {needle:?}:\n{text}");
    }
}
