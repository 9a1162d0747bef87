use std::path::{Path, PathBuf};

use equihf::cli::{complex_file_to_text, parse_complex_file, run_with, Outcome, SCHEMA};
use equihf::floermodel::{parse_datum, Builtin};

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_with(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>(), &|| Ok(String::new()))
}

fn run_stdin(args: &[&str], input: &str) -> Outcome {
    let input = input.to_string();
    run_with(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>(), &move || Ok(input.clone()))
}

fn json(out: &Outcome) -> serde_json::Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("not json ({e}): {}", out.stdout))
}

fn corpus(dir: &str, ext: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> =
        std::fs::read_dir(data(dir)).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == ext)).collect();
    files.sort();
    files
}

#[test]
fn clifford_through_a_pipe() {
    let datum = run(&["example", "clifford"]);
    assert_eq!(datum.code, 0);
    let out = run_stdin(&["--json", "floer-transfer"], &datum.stdout);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["values"]["h_dim"], 2);
    assert_eq!(v["values"]["d_transferred"], serde_json::json!(["00", "00"]));
    assert_eq!(v["schema"], SCHEMA);
}

#[test]
fn strata_table_has_six_rows() {
    let out = run(&["--json", "strata", "--space", "P", "--i", "2", "--sigma", "+", "--codim", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out)["tables"][0]["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn cz_krein_single_block() {
    let out = run(&["--json", "cz-krein", "--blocks", "i-:a=-0.5"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["values"]["kappa_minus_n"], -1);
    assert_eq!(v["values"]["mu_square_minus_2mu"], -1);
}

#[test]
fn examples_validate_and_round_trip() {
    let out = run(&["example", "morse_pair", "--i", "1", "--n", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(parse_datum(&out.stdout).unwrap().to_text(), out.stdout);
    assert_eq!(run_stdin(&["floer-validate"], &out.stdout).code, 0);

    let annulus = parse_datum(&run(&["example", "annulus"]).stdout).unwrap();
    assert_eq!(annulus.k(), 4);
    let clifford = parse_datum(&run(&["example", "clifford"]).stdout).unwrap();
    assert!(clifford.rho.iter().enumerate().all(|(i, &j)| i != j));

    for b in Builtin::catalogue() {
        let text = run(&["example", &b.to_string()]).stdout;
        assert_eq!(text, b.build().unwrap().to_text(), "{b}");
    }
}

#[test]
fn unknown_inputs_exit_two() {
    assert_eq!(run(&["example", "torus"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["blocks", "--n", "1", "--sign", "-", "--kappa", "1"]).code, 2);
    let out = run(&["check", &data("complexes/malformed.cx")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 9"), "{}", out.stderr);
    let out = run_stdin(&["floer-validate"], "mode exact\nn 1\nepsilon 1/20\n[phi]\nx zero 0\n");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 5"), "{}", out.stderr);
    assert_eq!(run(&["check", &data("no/such/file.cx")]).code, 2);
}

#[test]
fn failed_verdicts_exit_one() {
    let out = run(&["check", &data("complexes/d_squared_nonzero.cx")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("[FAIL] d_squared_zero"));
    let out = run(&["floer-localize", &data("floer/corrupted_diagonal.datum")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("[FAIL] localized_bijective"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn json_output_is_deterministic() {
    let cases: Vec<Vec<String>> = vec![
        vec!["krein".into(), "--blocks".into(), "iii:a1=0.3,a2=0.1;ii-:theta=-1".into()],
        vec!["floer-localize".into(), "builtin:annulus".into()],
        vec!["floer-smith".into(), data("floer/twisted_pair_2_2.datum")],
        vec!["equivariant".into(), data("complexes/circle_reflection.cx")],
        vec!["batch".into(), data("all.manifest")],
    ];
    for args in cases {
        let mut full = vec!["--json".to_string()];
        full.extend(args.iter().cloned());
        let a = run_with(&full, &|| Ok(String::new()));
        let b = run_with(&full, &|| Ok(String::new()));
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a.code, 0, "{args:?}: {}", a.stdout);
    }
}

#[test]
fn timing_is_opt_in() {
    let plain = json(&run(&["--json", "faces", "--i", "3", "--sigma", "-"]));
    assert!(plain.get("timing_ms").is_none());
    let timed = json(&run(&["--json", "--timing", "faces", "--i", "3", "--sigma", "-"]));
    assert!(timed["timing_ms"].as_f64().unwrap() >= 0.0);
    assert_eq!(plain["command"], timed["command"]);
}

#[test]
fn seed_flag_is_recorded() {
    let v = json(&run(&["--json", "--seed", "7", "krein", "--blocks", "ii+:theta=1"]));
    assert_eq!(v["values"]["seed"], 7);
}

#[test]
fn input_digest_tracks_the_bytes() {
    let a = json(&run(&["--json", "check", &data("complexes/circle_antipodal.cx")]));
    let b = json(&run(&["--json", "check", &data("complexes/circle_reflection.cx")]));
    assert_ne!(a["input_digest"], b["input_digest"]);
    assert!(a["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn shipped_datum_files_round_trip() {
    let files = corpus("floer", "datum");
    assert!(files.len() >= 8);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let normalized = parse_datum(&text).unwrap().to_text();
        assert_eq!(parse_datum(&normalized).unwrap().to_text(), normalized, "{}", f.display());
        if !text.starts_with('#') {
            assert_eq!(normalized, text, "{} is not in normal form", f.display());
        }
    }
}

#[test]
fn shipped_complex_files_round_trip() {
    for f in corpus("complexes", "cx") {
        let text = std::fs::read_to_string(&f).unwrap();
        let Ok(parsed) = parse_complex_file(&text) else {
            assert!(f.ends_with("malformed.cx"), "{} does not parse", f.display());
            continue;
        };
        let normalized = complex_file_to_text(&parsed);
        assert_eq!(parse_complex_file(&normalized).unwrap(), parsed, "{}", f.display());
        assert_eq!(complex_file_to_text(&parse_complex_file(&normalized).unwrap()), normalized);
    }
}

#[test]
fn complex_commands_on_the_corpus() {
    let v = json(&run(&["--json", "equivariant", &data("complexes/circle_reflection.cx")]));
    assert_eq!(v["values"]["free_rank"], 2);
    let v = json(&run(&["--json", "tate", &data("complexes/swapped_intervals.cx")]));
    assert_eq!(v["values"]["tate_dim"], 0);
    let v = json(&run(&["--json", "cohomology", &data("complexes/torsion.cx")]));
    assert_eq!(v["values"]["free_rank"], 1);
    assert_eq!(v["values"]["torsion_factors"], serde_json::json!(["h^2+h^3"]));
    let out = run(&["--json", "equivariant", &data("complexes/acyclic_free.cx")]);
    assert_eq!(out.code, 0);
    assert!(json(&out)["verdicts"].as_array().unwrap().iter().any(|v| v["name"] == "acyclicity_transfer" && v["passed"] == true));
}

#[test]
fn batch_exit_codes() {
    let all = run(&["--json", "batch", &data("all.manifest")]);
    assert_eq!(all.code, 0, "{}", all.stdout);
    let v = json(&all);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(v["values"]["entries"].as_u64().unwrap() as usize, verdicts.len());
    let lines: Vec<u64> = verdicts
        .iter()
        .map(|x| x["name"].as_str().unwrap().trim_start_matches("line ").split(':').next().unwrap().parse().unwrap())
        .collect();
    assert!(lines.windows(2).all(|w| w[0] < w[1]), "entries out of manifest order");

    let bad = run(&["batch", &data("corrupted.manifest")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("[FAIL] line 2: floer/corrupted_diagonal.datum floer-validate"));
    assert!(bad.stdout.contains("[PASS] line 1"));

    assert_eq!(run(&["batch", &data("broken.manifest")]).code, 2);

    let empty = run(&["--json", "batch", &data("empty.manifest")]);
    assert_eq!(empty.code, 0);
    assert_eq!(json(&empty)["verdicts"], serde_json::json!([]));

    assert_eq!(run(&["batch", &data("missing.manifest")]).code, 2);
}

#[test]
fn blocks_classification_for_small_n() {
    for n in 1..=4 {
        let out = run(&["blocks", "--n", &n.to_string()]);
        assert_eq!(out.code, 0, "n = {n}: {}", out.stdout);
    }
    let out = run(&["--json", "blocks", "--n", "3", "--sign", "-1", "--kappa", "-2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(json(&out)["values"]["kappa"], -2);
}

#[test]
fn krein_from_matrix_and_blocks_agree() {
    let a = json(&run(&["--json", "krein", "--matrix", "0.5, 0; 0, 2"]));
    let b = json(&run(&["--json", "krein", "--blocks", "i+:a=0.5"]));
    assert_eq!(a["values"]["kappa"], b["values"]["kappa"]);
    assert_eq!(run(&["krein"]).code, 2);
    assert_eq!(run(&["krein", "--matrix", "1, 2; 3"]).code, 2);
}

#[test]
fn binary_reads_standard_input() {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let bin = env!("CARGO_BIN_EXE_equihf");
    let example = Command::new(bin).args(["example", "clifford"]).output().unwrap();
    assert!(example.status.success());
    let mut child = Command::new(bin).arg("floer-transfer").stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(&example.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("h_dim = 2"));
    let bad = Command::new(bin).args(["check", "/nonexistent.cx"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
