use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use emofuse::analytics::SessionReport;
use emofuse::fuzzy::{default_system, InferenceSystem, RulesMode};
use emofuse::timeline::{parse_audio_labels, parse_video_csv};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn emofuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emofuse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report_for(game: &str, dir: &Path) -> Value {
    let out = dir.join(format!("{game}.json"));
    let o = emofuse(&[
        "report",
        "--audio",
        s(&fixture(&format!("{game}_audio.csv"))),
        "--video",
        s(&fixture(&format!("{game}_video.csv"))),
        "--out",
        s(&out),
        "--game",
        game,
    ]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    assert!(o.stderr.is_empty() && o.stdout.is_empty());
    serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap()
}

#[test]
fn fuse_fight_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fused.csv");
    let o = emofuse(&[
        "fuse",
        "--audio",
        s(&fixture("fight_audio.csv")),
        "--video",
        s(&fixture("fight_video.csv")),
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    assert!(o.stderr.is_empty() && o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,angry,disgust,fear,happy,neutral,sad,surprise");
    assert_eq!(lines.len(), 11);
    for line in &lines[1..] {
        for cell in line.split(',').skip(1) {
            let (_, decimals) = cell.split_once('.').unwrap();
            assert_eq!(decimals.len(), 2, "{cell}");
            let v: f64 = cell.parse().unwrap();
            assert!((0.0..=100.0).contains(&v));
        }
    }
}

#[test]
fn missing_input_is_a_timeline_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = emofuse(&[
        "fuse",
        "--audio",
        "/does/not/exist.csv",
        "--video",
        s(&fixture("fight_video.csv")),
        "--out",
        s(&dir.path().join("x.csv")),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = text(&o.stderr);
    assert!(err.starts_with("error: timeline_io: "), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn malformed_and_disjoint_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "t,label\n0,sad\n1,meh\n").unwrap();
    let o = emofuse(&[
        "fuse",
        "--audio",
        s(&bad),
        "--video",
        s(&fixture("fight_video.csv")),
        "--out",
        s(&dir.path().join("o.csv")),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(text(&o.stderr).contains("line 3"));

    let late = dir.path().join("late.csv");
    std::fs::write(&late, "t,label\n50,sad\n51,sad\n").unwrap();
    let o = emofuse(&[
        "fuse",
        "--audio",
        s(&late),
        "--video",
        s(&fixture("fight_video.csv")),
        "--out",
        s(&dir.path().join("o.csv")),
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(text(&o.stderr).starts_with("error: timeline_io: no overlap"));
}

#[test]
fn clamped_scores_warn_but_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let video = dir.path().join("v.csv");
    std::fs::write(
        &video,
        "t,angry,disgust,fear,happy,neutral,sad,surprise\n0,0,0,0,1.2,0,0,0\n1,0,0,0,0.9,0,0,0\n",
    )
    .unwrap();
    let audio = dir.path().join("a.csv");
    std::fs::write(&audio, "t,label\n0,happy\n1,happy\n").unwrap();
    let o = emofuse(&[
        "fuse",
        "--audio",
        s(&audio),
        "--video",
        s(&video),
        "--out",
        s(&dir.path().join("o.csv")),
    ]);
    assert!(o.status.success());
    assert!(text(&o.stderr).starts_with("warning: timeline_io: "));
}

/// Cells that differ between rule modes must involve an input pair where a
/// (Medium, Medium) or (High, Medium) antecedent fires.
#[test]
fn verbatim_rules_differ_only_where_row_eight_applies() {
    let dir = tempfile::tempdir().unwrap();
    let run = |mode: &str| {
        let out = dir.path().join(format!("{mode}.csv"));
        let o = emofuse(&[
            "fuse",
            "--audio",
            s(&fixture("fight_audio.csv")),
            "--video",
            s(&fixture("fight_video.csv")),
            "--out",
            s(&out),
            "--rules",
            mode,
        ]);
        assert!(o.status.success(), "{}", text(&o.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    let (completed, verbatim) = (run("completed"), run("verbatim"));

    let audio = parse_audio_labels(&std::fs::read(fixture("fight_audio.csv")).unwrap())
        .unwrap()
        .points;
    let video = parse_video_csv(&std::fs::read(fixture("fight_video.csv")).unwrap())
        .unwrap()
        .points;
    let sys = default_system(RulesMode::Completed);
    let mut differing = 0;
    for (row, (c, v)) in completed.lines().zip(verbatim.lines()).enumerate().skip(1) {
        for (col, (x, y)) in c.split(',').zip(v.split(',')).enumerate().skip(1) {
            if x == y {
                continue;
            }
            differing += 1;
            let e = emofuse::emotion::Emotion::ALL[col - 1];
            let (a, b) = (100.0 * audio[row - 1].v[e], 100.0 * video[row - 1].v[e]);
            let f = sys.fuzzify_inputs(&[a, b]).unwrap();
            let (am, ah, vm) = (
                f[0].get("Medium").unwrap(),
                f[0].get("High").unwrap(),
                f[1].get("Medium").unwrap(),
            );
            assert!(
                vm > 0.0 && (am > 0.0 || ah > 0.0),
                "unexpected diff at row {row} col {col}"
            );
        }
    }
    assert!(differing > 0, "fixture should exercise row 8");
}

#[test]
fn reports_reproduce_prevailing_audio() {
    let dir = tempfile::tempdir().unwrap();
    for (game, expected) in [("fight", "sad"), ("racing", "sad"), ("logic", "neutral")] {
        let r = report_for(game, dir.path());
        assert_eq!(r["prevailing"]["audio"], expected, "{game}");
        assert_eq!(r["game"], game);
    }
}

#[test]
fn report_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let r = report_for("fight", dir.path());
    let obj = r.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "diversity",
            "game",
            "prevailing",
            "stability",
            "stats_fused",
            "stats_video",
            "system_fingerprint"
        ]
    );
    assert!(r["game"].is_string());
    for k in ["audio", "video", "fused"] {
        let e = r["prevailing"][k].as_str().unwrap();
        assert!(e.parse::<emofuse::emotion::Emotion>().is_ok() && e != "fearful");
    }
    for stats in ["stats_video", "stats_fused"] {
        let m = r[stats].as_object().unwrap();
        assert_eq!(m.len(), 7);
        for e in emofuse::emotion::Emotion::ALL {
            let entry = m[e.as_str()].as_object().unwrap();
            for f in ["mean", "median", "variance", "sd"] {
                assert!(entry[f].is_number(), "{stats}.{e}.{f}");
            }
            assert_eq!(entry.len(), 4);
        }
    }
    let stability = r["stability"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&stability));
    let diversity = r["diversity"].as_u64().unwrap();
    assert!(diversity <= 7);
    assert!(r["system_fingerprint"].as_str().unwrap().starts_with("sha256:"));

    let raw = std::fs::read_to_string(dir.path().join("fight.json")).unwrap();
    assert!(!raw.contains(dir.path().to_str().unwrap()));
    let parsed = SessionReport::from_json(&raw).unwrap();
    assert_eq!(parsed.to_json() + "\n", raw);
}

#[test]
fn eval_anchors() {
    let value = |a: &str, v: &str| -> f64 {
        let o = emofuse(&["eval", "--audio-pct", a, "--video-pct", v]);
        assert!(o.status.success());
        assert!(o.stderr.is_empty());
        text(&o.stdout).trim().parse().unwrap()
    };
    let worked = value("12", "85");
    assert!((42.55..=52.55).contains(&worked), "{worked}");
    assert!((value("0", "0") - 8.33).abs() < 0.05);
    assert!((value("100", "100") - 91.67).abs() < 0.05);
}

#[test]
fn simulate_is_deterministic_and_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let (a, v) = (
            dir.path().join(format!("{tag}_a.csv")),
            dir.path().join(format!("{tag}_v.csv")),
        );
        let o = emofuse(&[
            "simulate",
            "--archetype",
            "logic",
            "--duration",
            "10",
            "--seed",
            "7",
            "--out-audio",
            s(&a),
            "--out-video",
            s(&v),
        ]);
        assert!(o.status.success(), "{}", text(&o.stderr));
        (std::fs::read(a).unwrap(), std::fs::read(v).unwrap())
    };
    let first = run("one");
    assert_eq!(first, run("two"));
    let audio = parse_audio_labels(&first.0).unwrap();
    let video = parse_video_csv(&first.1).unwrap();
    assert!(audio.diagnostics.is_empty() && video.diagnostics.is_empty());
    assert_eq!(audio.points.len(), 10);

    let o = emofuse(&[
        "simulate",
        "--archetype",
        "fight",
        "--duration",
        "1",
        "--out-audio",
        s(&dir.path().join("a")),
        "--out-video",
        s(&dir.path().join("v")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o.stderr).starts_with("error: session_sim: "));
}

#[test]
fn simulated_fight_is_less_stable_than_logic() {
    let dir = tempfile::tempdir().unwrap();
    let stability = |archetype: &str| {
        let (a, v, r) = (
            dir.path().join(format!("{archetype}_a.csv")),
            dir.path().join(format!("{archetype}_v.csv")),
            dir.path().join(format!("{archetype}.json")),
        );
        let o = emofuse(&[
            "simulate",
            "--archetype",
            archetype,
            "--duration",
            "600",
            "--seed",
            "1",
            "--out-audio",
            s(&a),
            "--out-video",
            s(&v),
        ]);
        assert!(o.status.success());
        let o = emofuse(&["report", "--audio", s(&a), "--video", s(&v), "--out", s(&r)]);
        assert!(o.status.success(), "{}", text(&o.stderr));
        let report: Value = serde_json::from_str(&std::fs::read_to_string(r).unwrap()).unwrap();
        report["stability"].as_f64().unwrap()
    };
    assert!(stability("fight") < stability("logic"));
}

#[test]
fn inspect_rules_default_and_verbatim() {
    let o = emofuse(&["inspect-rules"]);
    assert!(o.status.success() && o.stderr.is_empty());
    let def: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(def["rules"].as_array().unwrap().len(), 9);
    let sizes: Vec<usize> = def["inputs"]
        .as_array()
        .unwrap()
        .iter()
        .chain(std::iter::once(&def["output"]))
        .map(|v| v["sets"].as_array().unwrap().len())
        .collect();
    assert_eq!(sizes, vec![3, 3, 5]);
    assert_eq!(def["rules"][7]["antecedents"][0][1], "High");
    assert!(def["rules"][7]["note"].is_string());

    let o = emofuse(&["inspect-rules", "--rules", "verbatim"]);
    let def: Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in [4, 7] {
        let ants = &def["rules"][row]["antecedents"];
        assert_eq!(ants[0][1], "Medium");
        assert_eq!(ants[1][1], "Medium");
    }
}

#[test]
fn custom_system_is_echoed_canonically() {
    let dir = tempfile::tempdir().unwrap();
    let mut def = default_system(RulesMode::Completed).definition();
    def.grid_resolution = 501;
    def.rules.truncate(8);
    def.rules.push(emofuse::fuzzy::RuleDefinition {
        antecedents: vec![
            ("Audio Emotion Intensity".into(), "High".into()),
            ("Video Emotion Intensity".into(), "High".into()),
        ],
        consequent: "Very High".into(),
        note: None,
    });
    // compact, non-canonical formatting on disk
    let path = dir.path().join("sys.json");
    std::fs::write(&path, serde_json::to_string(&def).unwrap()).unwrap();
    let o = emofuse(&["inspect-rules", "--system", s(&path)]);
    assert!(o.status.success(), "{}", text(&o.stderr));
    let expected = InferenceSystem::from_definition(&def).unwrap().to_json() + "\n";
    assert_eq!(text(&o.stdout), expected);

    let o = emofuse(&["eval", "--audio-pct", "100", "--video-pct", "100", "--system", s(&path)]);
    let v: f64 = text(&o.stdout).trim().parse().unwrap();
    assert!((v - 75.0).abs() < 0.05, "{v}");

    std::fs::write(&path, "{\"inputs\": 3}").unwrap();
    let o = emofuse(&["inspect-rules", "--system", s(&path)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(text(&o.stderr).starts_with("error: fuzzy_core: "));
}

#[test]
fn conflicting_flags_are_usage_errors() {
    let o = emofuse(&[
        "eval",
        "--audio-pct",
        "1",
        "--video-pct",
        "2",
        "--system",
        "x.json",
        "--rules",
        "verbatim",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = emofuse(&[
        "report",
        "--audio",
        "a",
        "--video",
        "v",
        "--out",
        "o",
        "--diversity",
        "median",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
