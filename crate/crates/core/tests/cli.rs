//! End-to-end runs of the `hderiv` binary.

use std::io::Write;
use std::process::{Command, Output};

use hderiv::check::{ReportDocument, REPORT_SCHEMA};

fn hderiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hderiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_and_diff_print_quaternions() {
    let out = hderiv(&["eval", "z^2", "--at", "0+1i+1j+0k"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "-2+0i+0j+0k");

    let out = hderiv(&["diff", "z^3", "--at", "1+j"]);
    assert_eq!(out.status.code(), Some(0));
    let d: hderiv::Quaternion = stdout(&out).trim().parse().unwrap();
    assert!(d.approx_eq(hderiv::Quaternion::I2 * 6.0, 1e-13));
}

#[test]
fn bound_constants() {
    let out = hderiv(&["--bind", "c=2+i", "diff", "1/(c - z)", "--at", "k"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let d: hderiv::Quaternion = stdout(&out).trim().parse().unwrap();
    let c = hderiv::Quaternion::new(2.0, 1.0, 0.0, -1.0);
    assert!(d.approx_eq(c.pow_int(-2).unwrap(), 1e-14));
}

#[test]
fn exit_codes() {
    assert_eq!(
        hderiv(&["check", "exp(z)", "--at", "1+i,-0.5j"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        hderiv(&[
            "check",
            "exp(z)",
            "--at",
            "1+i",
            "--tol",
            "0.00000000000000000001"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        hderiv(&["check", "exp(z", "--at", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hderiv(&["check", "exp(z)", "--at", "1+q"]).status.code(),
        Some(2)
    );
    assert_eq!(hderiv(&["check", "exp(z)"]).status.code(), Some(2));
    assert_eq!(
        hderiv(&["eval", "inv(z)", "--at", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(hderiv(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_error_does_not_abort_batch() {
    let out = hderiv(&["check", "ln(z)", "--at", "-2,1+i", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: ReportDocument = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc.schema, REPORT_SCHEMA);
    assert_eq!(doc.results.len(), 2);
    assert!(doc.results[0].error.as_deref().unwrap().contains("ln(z)"));
    assert!(doc.results[1].pass);
}

#[test]
fn json_preserves_point_order() {
    let points = "0.1,0.2+i,-1.5k,2-j,0.3+0.3i+0.3j+0.3k";
    let out = hderiv(&["check", "sin(z)*z", "--at", points, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: ReportDocument = serde_json::from_str(stdout(&out).trim()).unwrap();
    let got: Vec<String> = doc.results.iter().map(|r| r.point.to_string()).collect();
    let want: Vec<String> = points
        .split(',')
        .map(|p| p.parse::<hderiv::Quaternion>().unwrap().to_string())
        .collect();
    assert_eq!(got, want);
    for r in &doc.results {
        assert_eq!(r.pass, r.abs_error.unwrap() <= r.tolerance);
    }
}

#[test]
fn corpus_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        file,
        "# two expressions\nz^2 ; 1+i\nz^2 ; -j\n\nexp(z) ; 0.5k"
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let out = hderiv(&["check", "--corpus", path, "--json"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let docs: Vec<ReportDocument> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0].results.len(), 2);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "z^ ; 1").unwrap();
    let out = hderiv(&["check", "--corpus", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_report_lists_diagnostics() {
    let out = hderiv(&["check", "exp(z) + ln(z)", "--at", "1+i"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("PASS"), "{text}");
    assert!(text.contains("series order"));
    assert!(text.contains("condition numbers"));
}
