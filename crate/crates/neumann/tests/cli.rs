use std::path::Path;
use std::process::{Command, Output};

use neumann::report::PartitionDoc;

fn neumann(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neumann")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn figure_partition_writes_the_counts() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let o = neumann(&[
        "partition", "--domain", "rect:2,1", "--n", "3", "--m", "2", "--resolution", "512", "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: PartitionDoc = serde_json::from_str(&read(&json)).unwrap();
    assert_eq!((doc.counts.total, doc.counts.inner, doc.counts.boundary), (17, 7, 10));
    assert_eq!(doc.domains.len(), 17);
    assert_eq!(doc.domains.iter().filter(|d| d.class == "boundary").count(), 10);
    assert!(doc.lines.length_total > 0.0);
    let area: f64 = doc.domains.iter().map(|d| d.area).sum();
    assert!((area - 2.0).abs() < 1e-9, "{area}");
}

#[test]
fn constants_match_the_published_values() {
    let o = neumann(&["constants"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value = |name: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(name)).unwrap();
        line.split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    assert!((value("rectangle:") - 4.0 / std::f64::consts::PI).abs() < 1e-12);
    assert!((value("disk:") - 0.9226).abs() < 5e-4);
}

#[test]
fn disk_count_table_matches_everywhere() {
    let o = neumann(&["count-table", "--domain", "disk", "--nmax", "3", "--mmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("n,m,mu_formula,mu_labeled,match"));
    let rows: Vec<&str> = rows.collect();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert!(r.ends_with(",true"), "{r}");
    }
}

#[test]
fn rendering_is_deterministic_and_fills_every_domain() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for (p, threads) in [(&a, "1"), (&b, "3")] {
        let o = Command::new(env!("CARGO_BIN_EXE_neumann"))
            .env("NEUMANN_THREADS", threads)
            .args(["render", "--domain", "rect:2,1", "--n", "3", "--m", "2", "--out", p.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
    }
    let svg = read(&a);
    assert_eq!(svg, read(&b));
    assert_eq!(svg.matches(r#"<path class="domain boundary""#).count(), 10);
    assert_eq!(svg.matches(r#"<path class="domain inner""#).count(), 7);
    assert!(svg.contains(r#"class="nodal""#));
    assert!(svg.contains(r#"class="neumann""#));
}

#[test]
fn radial_render_draws_its_critical_circle() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.svg");
    let o = neumann(&["render", "--domain", "disk", "--n", "0", "--m", "2", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = read(&p);
    assert_eq!(svg.matches("<circle").count(), 1);
    assert!(svg.contains(r#"<circle class="critical-circle" cx="0" cy="0" r="0.6941"/>"#));
}

#[test]
fn json_is_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2", "1"] {
        let p = dir.path().join(format!("{}.json", outputs.len()));
        let o = Command::new(env!("CARGO_BIN_EXE_neumann"))
            .env("NEUMANN_THREADS", threads)
            .args(["partition", "--domain", "disk", "--n", "1", "--m", "2", "--json", p.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        outputs.push(std::fs::read(&p).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn failed_verification_exits_with_two() {
    let o = neumann(&["partition", "--domain", "rect:2,1", "--n", "2", "--m", "1", "--verify", "--align-tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("(e) FAIL"));
    let o = neumann(&["partition", "--domain", "rect:2,1", "--n", "2", "--m", "1", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_and_io_errors_exit_with_one() {
    assert_eq!(neumann(&["partition", "--domain", "rect:2,1", "--n", "3", "--bogus"]).status.code(), Some(1));
    assert_eq!(neumann(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(neumann(&["modes", "--domain", "annulus"]).status.code(), Some(1));
    let o = neumann(&["partition", "--domain", "rect:2,1", "--n", "1", "--m", "1", "--json", "/nonexistent/dir/x.json"]);
    assert_eq!(o.status.code(), Some(1));
    let o = neumann(&["partition", "--domain", "rect:2,1", "--n", "6", "--m", "6", "--resolution", "64"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(neumann(&["--help"]).status.code(), Some(0));
}

#[test]
fn listing_commands_print_csv() {
    let o = neumann(&["modes", "--domain", "rect:1,1", "--k", "3"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("1,1,1,,"));

    let o = neumann(&["specfun", "zeros", "--order", "0", "--count", "1"]);
    let v: f64 = stdout(&o).lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((v - 2.404_825_557_695_773).abs() < 1e-12);

    let o = neumann(&["critical", "--domain", "disk", "--n", "0", "--m", "2"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("max,0,0,")));
    assert!(text.lines().any(|l| l.starts_with("min-circle,,,0.69413980991")));

    let o = neumann(&["flow", "--domain", "rect:1,1", "--n", "1", "--m", "1", "--x", "0.3", "--y", "0.2"]);
    let text = stdout(&o);
    assert!(text.contains("forward: hit the Dirichlet boundary"));
    assert!(text.contains("backward: converged to max at (0.5, 0.5)"));
}
