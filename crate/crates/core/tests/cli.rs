use std::process::Command;

use trajgreen::cli::ResultDocument;
use trajgreen::{rat, EpsSeries, ParamScalar, Poly1D};

fn trajgreen() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trajgreen"))
}

#[test]
fn solve1d_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cubic.json");
    let status = trajgreen()
        .args([
            "solve1d",
            "--potential",
            "odd:1",
            "--order",
            "2",
            "--format",
            "json",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let doc = ResultDocument::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let run = &doc.runs[0];
    let last = run.final_step().unwrap();
    assert!(last.fixed_point);
    let delta = run.delta(last).unwrap();
    assert_eq!(
        delta,
        EpsSeries::monomial(2, ParamScalar::monomial(rat(-11, 8), -4), 2)
    );
    let state: EpsSeries<Poly1D> = run.state(last).unwrap();
    assert_eq!(
        state.coeff(1).coeff(3),
        ParamScalar::monomial(rat(1, 3), -1)
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "command = \"solve1d\"\n\
         [problem]\nsystem = \"line\"\norder = 2\n\
         [problem.potential]\nkind = \"even-power\"\np = 2\n",
    )
    .unwrap();
    let output = trajgreen()
        .args(["solve1d", "--format", "text", "--order", "1", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("N_ε = 1"), "{text}");
    assert!(text.contains("3/4·ε^1·g^-2"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[problem]\norderr = 3\n").unwrap();
    let output = trajgreen()
        .args(["solve1d", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("orderr"));

    let output = trajgreen().args(["solve1d"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_oracle_csv() {
    let output = trajgreen()
        .args(["verify-oracle", "--g-value", "2", "--format", "csv"])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("label,value_table,value_oracle"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")), "{text}");
}

#[test]
fn stark_fourth_order_notes_sign() {
    let output = trajgreen()
        .args(["stark", "--order", "4", "--format", "text"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("-3555/64·ε^4·g^-20"), "{text}");
    assert!(text.contains("note:"));
}
