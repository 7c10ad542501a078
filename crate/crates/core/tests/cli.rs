//! End-to-end runs of the command-line interface against temporary files:
//! exit codes, file outputs, and format round-trips.

use std::path::{Path, PathBuf};

use infobs::alphabet::Word;
use infobs::cli::run_cli;
use infobs::io::parse_dfa;

fn run(args: &[&str]) -> i32 {
    let mut argv = vec!["infobs"];
    argv.extend_from_slice(args);
    run_cli(argv)
}

fn path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> String {
    p.to_str().expect("temp paths are valid unicode").to_string()
}

#[test]
fn gen_check_and_compute_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(&dir, "spec.aut");
    let mask = path(&dir, "mask.txt");
    let out = path(&dir, "out.aut");

    assert_eq!(run(&["gen", "fig3", "-o", &s(&spec)]), 0);
    assert_eq!(run(&["check", "prefix-closed", &s(&spec)]), 1);

    std::fs::write(&mask, "a -> a\nb -> b\nc -> eps\n").unwrap();
    assert_eq!(
        run(&["compute", "inf-o", "-k", &s(&spec), "-m", &s(&mask), "-o", &s(&out)]),
        0
    );
    let result = parse_dfa(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(result.num_states(), 2);
    assert_eq!(run(&["check", "prefix-closed", &s(&out)]), 0);
    assert!(result.accepts(&Word::empty()).unwrap());
    assert!(result.accepts(&Word::of(&["a", "c", "b"])).unwrap());
    assert!(!result.accepts(&Word::of(&["c"])).unwrap());
}

#[test]
fn gen_families_and_nfa_check() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(&dir, "fam.aut");

    assert_eq!(run(&["gen", "fig4", "-o", &s(&f)]), 0);
    assert_eq!(run(&["check", "prefix-closed", &s(&f), "--nfa"]), 0);

    assert_eq!(run(&["gen", "lowerbound", "--n", "4", "-o", &s(&f)]), 0);
    let d = parse_dfa(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(d.num_states(), 4);

    assert_eq!(run(&["gen", "quotient", "--n", "3", "-o", &s(&f)]), 0);
    assert_eq!(run(&["gen", "prime", "--n", "2", "-o", &s(&f)]), 0);
    // The prime family file is nondeterministic; reading it as a DFA fails.
    assert_eq!(run(&["check", "prefix-closed", &s(&f)]), 2);
    assert_eq!(run(&["check", "prefix-closed", &s(&f), "--nfa"]), 1);
}

#[test]
fn gen_argument_validation() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(&dir, "x.aut");
    assert_eq!(run(&["gen", "lowerbound", "-o", &s(&f)]), 2);
    assert_eq!(run(&["gen", "fig3", "--n", "3", "-o", &s(&f)]), 2);
    assert_eq!(run(&["gen", "lowerbound", "--n", "1", "-o", &s(&f)]), 2);
    assert_eq!(run(&["gen", "prime", "--n", "9", "-o", &s(&f)]), 2);
}

#[test]
fn compute_inf_c_and_inf_co() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(&dir, "spec.aut");
    let plant = path(&dir, "plant.aut");
    let mask = path(&dir, "mask.txt");
    let out = path(&dir, "out.aut");

    std::fs::write(
        &spec,
        "alphabet: a b\nstates: p q r\ninitial: p\nmarked: r\ntrans: p a q\ntrans: q b r\n",
    )
    .unwrap();
    assert_eq!(
        run(&["compute", "inf-c", "-k", &s(&spec), "--uncontrollable", "b", "-o", &s(&out)]),
        0
    );
    let d = parse_dfa(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for (accepted, toks) in [
        (true, vec![]),
        (true, vec!["b"]),
        (true, vec!["a", "b", "b"]),
        (false, vec!["b", "a"]),
        (false, vec!["a", "a"]),
    ] {
        assert_eq!(d.accepts(&Word::of(&toks)).unwrap(), accepted, "{toks:?}");
    }

    std::fs::write(
        &plant,
        "alphabet: a b\nstates: g\ninitial: g\nmarked: g\ntrans: g a g\ntrans: g b g\n",
    )
    .unwrap();
    std::fs::write(&mask, "a -> a\nb -> eps\n").unwrap();
    assert_eq!(
        run(&[
            "compute", "inf-co", "-k", &s(&spec), "-g", &s(&plant), "-m", &s(&mask),
            "--uncontrollable", "b", "-o", &s(&out),
        ]),
        0
    );
    assert_eq!(run(&["check", "prefix-closed", &s(&out)]), 0);
}

#[test]
fn bench_writes_csv_within_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(&dir, "rows.csv");
    assert_eq!(
        run(&["bench", "lowerbound", "--n-min", "2", "--n-max", "5", "--csv", &s(&csv)]),
        0
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("n,input_states,gh_nfa_states,"));
    assert!(lines[1].starts_with("2,2,3,"));

    assert_eq!(
        run(&["bench", "lowerbound", "--n-min", "1", "--n-max", "5", "--csv", &s(&csv)]),
        2
    );
    assert_eq!(
        run(&["bench", "lowerbound", "--n-min", "5", "--n-max", "2", "--csv", &s(&csv)]),
        2
    );
}

#[test]
fn verify_subcommands_pass_on_small_runs() {
    assert_eq!(
        run(&["verify", "lemma1", "--instances", "5", "--max-states", "4", "--seed", "7"]),
        0
    );
    assert_eq!(
        run(&["verify", "lemma3", "--instances", "5", "--max-states", "4", "--seed", "7"]),
        0
    );
    assert_eq!(
        run(&["verify", "oracle", "--instances", "3", "--max-states", "4", "--seed", "7"]),
        0
    );
}

#[test]
fn export_dot_renders_marked_states() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(&dir, "spec.aut");
    let dot = path(&dir, "out.dot");
    assert_eq!(run(&["gen", "fig4", "-o", &s(&spec)]), 0);
    assert_eq!(run(&["export", "dot", &s(&spec), "-o", &s(&dot)]), 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph automaton {"));
    assert!(text.contains("doublecircle"));
    assert!(text.contains("rankdir=LR"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = path(&dir, "spec.aut");
    let mask = path(&dir, "mask.txt");
    let out = path(&dir, "out.aut");

    // Missing file.
    assert_eq!(
        run(&["compute", "inf-o", "-k", "/nonexistent.aut", "-m", "/x", "-o", &s(&out)]),
        2
    );
    // Bad automaton file: duplicate transition for a dfa.
    std::fs::write(
        &spec,
        "alphabet: a\ninitial: p\nmarked: p\ntrans: p a p\ntrans: p a p\n",
    )
    .unwrap();
    std::fs::write(&mask, "a -> a\n").unwrap();
    assert_eq!(
        run(&["compute", "inf-o", "-k", &s(&spec), "-m", &s(&mask), "-o", &s(&out)]),
        2
    );
    // Non-total mask.
    std::fs::write(&spec, "alphabet: a b\ninitial: p\nmarked: p\ntrans: p a p\n").unwrap();
    assert_eq!(
        run(&["compute", "inf-o", "-k", &s(&spec), "-m", &s(&mask), "-o", &s(&out)]),
        2
    );
    // Uncontrollable event outside the alphabet.
    assert_eq!(
        run(&["compute", "inf-c", "-k", &s(&spec), "--uncontrollable", "z", "-o", &s(&out)]),
        2
    );
    // Unknown subcommand and bad flag combinations.
    assert_eq!(run(&["frobnicate"]), 2);
    assert_eq!(run(&["check", "prefix-closed", &s(&spec), "--budget", "9"]), 2);
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = path(&dir, "n.aut");
    std::fs::write(
        &f,
        "alphabet: a\ninitial: p\nmarked: q\ntrans: p a q\ntrans: p a p\ntrans: q a p\n",
    )
    .unwrap();
    assert_eq!(
        run(&["check", "prefix-closed", &s(&f), "--nfa", "--budget", "1"]),
        3
    );
    assert_eq!(
        run(&["check", "prefix-closed", &s(&f), "--nfa", "--budget", "64"]),
        1
    );
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]), 0);
    assert_eq!(run(&["compute", "--help"]), 0);
    assert_eq!(run(&["gen", "--help"]), 0);
}
