use std::process::{Command, Output};

use mvglue_core::cohomology::Piece;
use mvglue_core::diffcoh::diff_equal;
use mvglue_core::gluing::Gluing;
use mvglue_core::scene::{bundled, Scene};
use serde_json::Value;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mvglue"));
    cmd.args(args).env_remove("MVGLUE_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn write_scene(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn cohomology_text_is_the_group() {
    let cases = [
        (&["--scene", "circle.json", "--degree", "1", "--ring", "int"][..], "Z\n"),
        (&["--scene", "torus", "--degree", "1", "--ring", "rat"][..], "Q^2\n"),
        (&["--scene", "circle", "--degree", "0", "--ring", "ratmod"][..], "Q/Z\n"),
        // Hom(H_1(RP^2), Q/Z) by universal coefficients
        (&["--scene", "rp2", "--degree", "1", "--ring", "ratmod"][..], "Z/2\n"),
        (&["--scene", "rp2", "--degree", "1", "--ring", "int", "--piece", "A"][..], "Z\n"),
        (&["--scene", "sphere", "--degree", "1", "--ring", "int", "--piece", "D"][..], "Z\n"),
    ];
    for (args, want) in cases {
        let mut full = vec!["cohomology"];
        full.extend_from_slice(args);
        let o = run(&full, &[]);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert_eq!(stdout(&o), want, "{args:?}");
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let uncovered = write_scene(
        &dir,
        "uncovered.json",
        r#"{"complex": [[0,1],[1,2],[0,2]], "decomposition": {"A": [[0,1]], "B": [[1,2]]},
            "coefficients": [{"degree": 0, "rank": 1}]}"#,
    );
    let o = run(&["cohomology", "--scene", &uncovered, "--degree", "1"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("[0,2]"), "{}", stderr(&o));

    let broken = write_scene(&dir, "broken.json", "{\"complex\": [[0,1]]\n,,}");
    let o = run(&["cohomology", "--scene", &broken, "--degree", "1"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = run(&["glue", "--scene", "circle", "--degree", "1", "--fa", "nope", "--fb", "zeroB"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope"));

    let o = run(&["glue", "--scene", "circle", "--degree", "2", "--fa", "jumpA", "--fb", "zeroB"], &[]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["obstruction", "--scene", "no-such-scene", "--degree", "1"], &[]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["cohomology", "--scene", "circle", "--degree", "1", "--ring", "complex"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn incoherent_pair_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scene(
        &dir,
        "half.json",
        r#"{"complex": [[0,1],[1,2],[0,2]], "decomposition": {"A": [[0,1],[1,2]], "B": [[0,2]]},
            "coefficients": [{"degree": 0, "rank": 1}],
            "classes": {"half": {"on": "A", "degree": 1, "rational": {"0": ["1/2"]}},
                        "zero": {"on": "B", "degree": 1}}}"#,
    );
    let o = run(&["glue", "--scene", &path, "--degree", "1", "--fa", "half", "--fb", "zero", "--format", "json"], &[]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["passed"], false);
    assert_eq!(r["checks"][0]["name"], "glue/coherent");
}

#[test]
fn glued_class_round_trips_through_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("glued.json");
    let o = run(
        &[
            "glue",
            "--scene",
            "sphere",
            "--degree",
            "2",
            "--fa",
            "monoA",
            "--fb",
            "monoB",
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let reread = Scene::load(&out).unwrap();
    let (piece, g) = reread.class("glued").unwrap();
    assert_eq!(*piece, Piece::X);

    let s = bundled("sphere").unwrap();
    let gl = Gluing::new(s.ctx.clone(), 2).unwrap();
    let (f, _) = gl.glue(&s.class("monoA").unwrap().1, &s.class("monoB").unwrap().1).unwrap();
    let g = mvglue_core::diffcoh::DiffClass { space: f.space.clone(), ..g.clone() };
    assert!(diff_equal(&f, &g));

    // the written scene is itself a valid input
    let o = run(&["cohomology", "--scene", out.to_str().unwrap(), "--degree", "2"], &[]);
    assert_eq!(stdout(&o), "Z\n");
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["verify-lemmas", "--scene", "rp2", "--degree", "2", "--seed", "9", "--format", "json"][..],
        &["verify-diagram1", "--scene", "torus", "--degree", "2", "--samples", "20", "--seed", "4", "--format", "json"]
            [..],
        &["verify-diagram2", "--scene", "circle-torsion", "--degree", "1", "--format", "text"][..],
    ] {
        let a = run(args, &[]);
        let b = run(args, &[]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn checks_are_sorted_by_name() {
    let o = run(&["verify-diagram1", "--scene", "circle", "--degree", "1", "--samples", "5", "--format", "json"], &[]);
    let names: Vec<String> =
        json(&o)["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.len() >= 16);
}

#[test]
fn seed_flag_beats_environment() {
    let args = ["verify-lemmas", "--scene", "circle", "--degree", "1", "--samples", "3", "--format", "json"];
    assert_eq!(json(&run(&args, &[]))["seed"], 0);
    assert_eq!(json(&run(&args, &[("MVGLUE_SEED", "17")]))["seed"], 17);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "5"]);
    assert_eq!(json(&run(&with_flag, &[("MVGLUE_SEED", "17")]))["seed"], 5);
}

#[test]
fn timing_is_opt_in_and_digest_is_stable() {
    let args = ["obstruction", "--scene", "rp2", "--degree", "2", "--format", "json"];
    let plain = json(&run(&args, &[]));
    assert!(plain.get("elapsed_ms").is_none());
    let mut timed = args.to_vec();
    timed.push("--timing");
    assert!(json(&run(&timed, &[]))["elapsed_ms"].is_number());

    // a copy on disk hashes the same as the bundled bytes
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rp2.json");
    std::fs::write(&path, mvglue_core::scene::bundled_source("rp2").unwrap()).unwrap();
    let from_file =
        json(&run(&["obstruction", "--scene", path.to_str().unwrap(), "--degree", "2", "--format", "json"], &[]));
    assert_eq!(from_file["scene"]["sha256"], plain["scene"]["sha256"]);
    assert_eq!(from_file["scene"]["bundled"], false);
    assert_eq!(plain["scene"]["bundled"], true);
}

#[test]
fn rp2_lemmas_report_cardinality() {
    let o = run(&["verify-lemmas", "--scene", "rp2.json", "--degree", "2"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS lemma6/cardinality: 2 = 2"));
}
