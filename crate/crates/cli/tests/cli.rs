use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cubulate(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubulate")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in
        [("grid.json", vec!["grid", "4", "4"]), ("square.json", vec!["square"]), ("cube.json", vec!["hypercube", "3"])]
    {
        let mut full = vec!["corpus"];
        full.extend(args);
        full.extend(["--out", name]);
        assert!(cubulate(dir.path(), &full).status.success());
    }
    fs::write(
        dir.path().join("switch.json"),
        r#"{"complex": "grid.json", "switches": [["0.1|0.2", "1.0|2.0"]], "n": 1}"#,
    )
    .unwrap();
    dir
}

#[test]
fn validate_reports_and_exit_codes() {
    let dir = setup();
    let report = json(&cubulate(dir.path(), &["validate", "grid.json"]));
    assert_eq!(report["derham_factors"], 2);
    assert_eq!(report["hyperplanes"], 6);
    assert_eq!(report["baldness"]["bald"], false);

    fs::write(
        dir.path().join("c6.json"),
        r#"{"vertices":["a","b","c","d","e","f"],"edges":[["a","b"],["b","c"],["c","d"],["d","e"],["e","f"],["f","a"]]}"#,
    )
    .unwrap();
    let out = cubulate(dir.path(), &["validate", "c6.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: NotMedian: triple ("), "{err}");

    assert_eq!(cubulate(dir.path(), &["validate", "missing.json"]).status.code(), Some(2));
    fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(cubulate(dir.path(), &["validate", "bad.json"]).status.code(), Some(2));
    fs::write(dir.path().join("dup.json"), r#"{"vertices":["a","a"],"edges":[]}"#).unwrap();
    assert_eq!(cubulate(dir.path(), &["validate", "dup.json"]).status.code(), Some(2));
    assert!(cubulate(dir.path(), &["--sample", "50", "validate", "grid.json"]).status.success());
}

#[test]
fn duals() {
    let dir = setup();
    let p = dir.path();
    fs::write(p.join("two.json"), r#"{"elements":["a","a*","b","b*"],"pairs":[["a","a*"],["b","b*"]]}"#).unwrap();
    let square = json(&cubulate(p, &["dual", "--pocset", "two.json"]));
    assert_eq!(square["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(square["edges"].as_array().unwrap().len(), 4);
    assert_eq!(square["vertices"][0], "u0");

    fs::write(
        p.join("walls.json"),
        r#"{"points":["x","y","z"],"walls":[{"plus":["x"],"minus":["y","z"]},{"plus":["y"],"minus":["x","z"]},{"plus":["z"],"minus":["x","y"]}]}"#,
    )
    .unwrap();
    assert!(cubulate(p, &["dual", "--walls", "walls.json", "--out", "tripod.json"]).status.success());
    let tripod = json(&cubulate(p, &["validate", "tripod.json"]));
    assert_eq!((tripod["vertices"].as_u64(), tripod["edges"].as_u64()), (Some(4), Some(3)));
    assert_eq!(tripod["facing_triples"].as_array().unwrap().len(), 1);

    fs::write(p.join("empty.json"), r#"{"elements":[],"pairs":[]}"#).unwrap();
    let point = json(&cubulate(p, &["dual", "--pocset", "empty.json"]));
    assert_eq!(point["vertices"].as_array().unwrap().len(), 1);

    fs::write(p.join("degenerate.json"), r#"{"elements":["a","a*"],"pairs":[["a","a*"]],"order":[["a","a*"]]}"#)
        .unwrap();
    assert_eq!(cubulate(p, &["dual", "--pocset", "degenerate.json"]).status.code(), Some(1));
}

#[test]
fn transforms() {
    let dir = setup();
    let p = dir.path();
    assert!(cubulate(p, &["subdivide", "square.json", "--out", "sub.json", "--map", "map.json"]).status.success());
    assert_eq!(read(&p.join("sub.json"))["vertices"].as_array().unwrap().len(), 9);
    let cover = read(&p.join("map.json"))["hyperplane_cover"].as_array().unwrap().clone();
    assert_eq!(cover.len(), 4);
    for over in ["00|01", "00|10"] {
        let sides: Vec<&Value> = cover.iter().filter(|c| c["over"] == over).map(|c| &c["side"]).collect();
        assert_eq!(sides.len(), 2);
        assert_ne!(sides[0], sides[1]);
    }

    assert!(cubulate(p, &["compress", "sub.json", "--out", "back.json"]).status.success());
    let back = json(&cubulate(p, &["validate", "back.json"]));
    assert_eq!(
        (back["vertices"].as_u64(), back["edges"].as_u64(), back["cubes"][2].as_u64()),
        (Some(4), Some(4), Some(1))
    );

    let report = json(&cubulate(p, &["derham", "cube.json", "--out-dir", "factors"]));
    assert_eq!(report["factors"].as_array().unwrap().len(), 3);
    assert_eq!(report["witness_verified"], true);
    for i in 0..3 {
        assert_eq!(read(&p.join(format!("factors/factor-{i}.json")))["vertices"].as_array().unwrap().len(), 2);
    }

    assert!(cubulate(p, &["quotient", "grid.json", "--keep", "0.0|1.0,0.1|0.2", "--out", "q.json"]).status.success());
    assert_eq!(json(&cubulate(p, &["validate", "q.json"]))["vertices"], 4);
    assert_eq!(cubulate(p, &["quotient", "grid.json", "--keep", "nope"]).status.code(), Some(1));

    assert!(cubulate(p, &["corpus", "square-pendant", "--out", "pendant.json"]).status.success());
    let trimmed = json(&cubulate(p, &["trim", "pendant.json", "--radius", "0"]));
    assert_eq!(trimmed["vertices"].as_array().unwrap().len(), 1);

    let corner = json(&cubulate(p, &["corner", "grid.json", "-0.0|1.0", "-0.0|0.1"]));
    assert!(corner["failed_hypotheses"].is_array());
}

#[test]
fn bending() {
    let dir = setup();
    let p = dir.path();
    let graph = json(&cubulate(p, &["bend", "graph", "switch.json"]));
    assert_eq!((graph["type1_vertices"].as_u64(), graph["type2_vertices"].as_u64()), (Some(4), Some(1)));
    assert_eq!(graph["forest"], true);

    let listed = json(&cubulate(p, &["bend", "enumerate", "switch.json"]));
    assert_eq!(listed["count"], 6);
    assert_eq!(listed["truncated"], false);
    assert_eq!(json(&cubulate(p, &["bend", "enumerate", "switch.json", "--limit", "3"]))["truncated"], true);

    // The L-shaped candidates use one piece of each hyperplane.
    let piece_plane: Vec<&Value> = graph["pieces"].as_array().unwrap().iter().map(|p| &p["hyperplane"]).collect();
    let l_shape = listed["subtrees"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| {
            let pieces = t["pieces"].as_array().unwrap();
            piece_plane[pieces[0].as_u64().unwrap() as usize] != piece_plane[pieces[1].as_u64().unwrap() as usize]
        })
        .unwrap()["id"]
        .to_string();
    let args = [
        "bend",
        "apply",
        "switch.json",
        "--crooked",
        &l_shape,
        "--keep-original-walls",
        "--out",
        "bent.json",
        "--report",
        "r.json",
    ];
    assert!(cubulate(p, &args).status.success());
    let sizes = read(&p.join("r.json"))["sides"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum::<u64>();
    assert_eq!(sizes, 16);
    let bent = json(&cubulate(p, &["validate", "bent.json"]));
    assert_eq!(bent["hyperplanes"], 5);

    let single = json(&cubulate(p, &["bend", "apply", "switch.json", "--crooked", &l_shape]));
    assert_eq!(single["vertices"].as_array().unwrap().len(), 2);

    assert_eq!(cubulate(p, &["bend", "apply", "switch.json", "--crooked", "99"]).status.code(), Some(1));
    fs::write(
        p.join("tight.json"),
        r#"{"complex": "grid.json", "switches": [["0.1|0.2", "0.0|1.0"], ["0.1|0.2", "1.0|2.0"]], "n": 2}"#,
    )
    .unwrap();
    let out = cubulate(p, &["bend", "graph", "tight.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: SpacingViolated:"));
}
