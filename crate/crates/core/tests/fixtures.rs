use std::path::Path;

use nichols::cli::{self, JobFile, Outcome};
use nichols::scalars::Field;
use serde_json::Value;

/// Every key of `want` must be present in `got` with a matching value;
/// arrays match elementwise with the same length.
/// Strings that differ are compared as scalars of `field`.
fn subset(want: &Value, got: &Value, path: &str, field: Option<&Field>) -> Result<(), String> {
    match (want, got) {
        (Value::Object(w), Value::Object(g)) => {
            for (k, v) in w {
                let g = g.get(k).ok_or_else(|| format!("{path}.{k}: missing"))?;
                subset(v, g, &format!("{path}.{k}"), field)?;
            }
            Ok(())
        }
        (Value::Array(w), Value::Array(g)) => {
            if w.len() != g.len() {
                return Err(format!("{path}: length {} vs {}", w.len(), g.len()));
            }
            for (k, (a, b)) in w.iter().zip(g).enumerate() {
                subset(a, b, &format!("{path}[{k}]"), field)?;
            }
            Ok(())
        }
        (Value::Number(a), Value::Number(b)) if a.as_f64() == b.as_f64() => Ok(()),
        _ if want == got => Ok(()),
        (Value::String(a), Value::String(b)) => {
            let same = field.is_some_and(|f| match (f.parse(a), f.parse(b)) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            });
            if same {
                Ok(())
            } else {
                Err(format!("{path}: expected {a}, got {b}"))
            }
        }
        _ => Err(format!("{path}: expected {want}, got {got}")),
    }
}

fn run_command(job: &JobFile, command: &str, want: &mut Value) -> Outcome {
    let r = match command {
        "analyze" => cli::analyze(job, false),
        "roots" => cli::roots(job, None),
        "weyl" => cli::weyl(job, None, None, false, None),
        "series-factor" => cli::series_factor(job),
        "present" => cli::present(job),
        "reflect" => {
            let index = want["index"].as_u64().expect("reflect needs an index") as usize;
            cli::reflect_once(job, index)
        }
        other => panic!("unknown command {other}"),
    };
    r.unwrap_or_else(|e| panic!("{command}: {e}"))
}

#[test]
fn fixture_corpus() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    assert!(paths.len() >= 10);
    let mut failures = Vec::new();
    for path in &paths {
        let job = JobFile::load(path).unwrap();
        let expect = job.expect.clone().expect("fixture without [expect]");
        let toml::Value::Table(cmds) = expect else { panic!("[expect] must be a table") };
        for (command, want) in cmds {
            let mut want = serde_json::to_value(&want).unwrap();
            let out = run_command(&job, &command, &mut want);
            if let Err(e) = out.status {
                failures.push(format!("{}: {command}: status {e}", path.display()));
            }
            let field = job.field().ok();
            if let Err(e) = subset(&want, &out.json, &command, field.as_ref()) {
                failures.push(format!("{}: {e}", path.display()));
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn affine_groupoid_hits_the_cap() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let job = JobFile::load(&dir.join("affine_a1.toml")).unwrap();
    let out = cli::weyl(&job, Some(200), None, false, None).unwrap();
    assert_eq!(out.status.unwrap_err().exit_code(), 4);
    assert_eq!(out.json["verdict"]["exceeded_cap"], 200);
}
