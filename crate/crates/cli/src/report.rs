use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use haar_walk::{Error, Result};
use serde_json::Value;

use crate::output::{exit, write_text, RunManifest};

/// JSON artifacts under `inputs`, directories expanded in name order; manifests are skipped.
pub fn collect(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            entries.sort();
            out.extend(entries.into_iter().filter(|e| e.extension().is_some_and(|x| x == "json") && !is_manifest(e)));
        } else if p.is_file() {
            out.push(p.clone());
        } else {
            return Err(missing(format!("{}: no such file or directory", p.display())));
        }
    }
    if out.is_empty() {
        return Err(missing("no analysis or verification JSON found".into()));
    }
    Ok(out)
}

fn missing(msg: String) -> Error {
    Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, msg))
}

fn is_manifest(p: &Path) -> bool {
    p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("manifest-"))
}

struct Artifact {
    source: String,
    value: Value,
}

fn load(path: &Path) -> Result<Artifact> {
    let text = fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    match value.get("kind").and_then(Value::as_str) {
        Some("analysis" | "verification") => Ok(Artifact { source: path.display().to_string(), value }),
        _ => Err(Error::Parse(format!("{}: not an analysis or verification artifact", path.display()))),
    }
}

fn num(v: Option<&Value>) -> String {
    match v {
        Some(Value::Number(n)) => n.as_f64().map_or_else(|| n.to_string(), |x| format!("{x:.6}")),
        Some(Value::Object(o)) => format!("[{}, {}]", num(o.get("lower")), num(o.get("upper"))),
        Some(Value::Bool(b)) => b.to_string(),
        _ => "n/a".into(),
    }
}

fn status(v: &Value) -> &'static str {
    let pass = v["pass"].as_bool().unwrap_or(false);
    match (pass, v["degenerate"].as_bool().unwrap_or(false), v["expected_failure"].as_bool().unwrap_or(false)) {
        (true, true, _) => "pass (degenerate)",
        (true, false, _) => "pass",
        (false, _, true) => "fail (expected)",
        (false, _, false) => "fail",
    }
}

const SUMMARY_KEYS: [&str; 8] = ["q", "delta", "c_series", "c_fourier", "adapted", "strictly_aperiodic", "abs_component", "degenerate"];

fn render_text(arts: &[Artifact]) -> String {
    let mut s = String::new();
    for a in arts {
        let v = &a.value;
        let kind = v["kind"].as_str().unwrap_or_default();
        let _ = writeln!(s, "== {kind}: {}", a.source);
        let _ = writeln!(s, "instance: {} / {} / {}", v["group"].as_str().unwrap_or("?"), v["measure"].as_str().unwrap_or("?"), v["function"].as_str().unwrap_or("?"));
        let summary = &v["summary"];
        for k in SUMMARY_KEYS {
            let _ = writeln!(s, "  {k:<20} {}", num(summary.get(k)));
        }
        if kind == "verification" {
            let _ = writeln!(s, "  seed {}  exit code {}", v["seed"], v["exit_code"]);
        }
        s.push('\n');
    }
    let verdicts: Vec<(&str, &Value)> = arts
        .iter()
        .flat_map(|a| a.value["verdicts"].as_array().into_iter().flatten().map(move |v| (a.source.as_str(), v)))
        .collect();
    if !verdicts.is_empty() {
        let _ = writeln!(s, "{:<16} {:<14} {:<28} {:<18} source", "law", "statistic", "reference", "status");
        for (src, v) in verdicts {
            let _ = writeln!(
                s,
                "{:<16} {:<14} {:<28} {:<18} {src}",
                v["law"].as_str().unwrap_or("?"),
                num(v.get("statistic")),
                num(v.get("reference")),
                status(v)
            );
        }
    }
    s
}

fn render_csv(arts: &[Artifact]) -> Result<String> {
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["source", "kind", "law", "statistic", "reference", "status", "q", "c"]).map_err(csv_err)?;
    for a in arts {
        let v = &a.value;
        let kind = v["kind"].as_str().unwrap_or_default();
        let q = num(v["summary"].get("q"));
        let c = num(v["summary"].get("c_fourier"));
        match v["verdicts"].as_array() {
            Some(list) => {
                for d in list {
                    let row = [&a.source, kind, d["law"].as_str().unwrap_or("?"), &num(d.get("statistic")), &num(d.get("reference")), status(d), &q, &c];
                    w.write_record(row).map_err(csv_err)?;
                }
            }
            None => w.write_record([&a.source, kind, "", "", "", "", &q, &c]).map_err(csv_err)?,
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).map_err(|e| Error::Parse(e.to_string()))
}

pub fn report_cmd(inputs: &[PathBuf], out: Option<&Path>, out_dir: &Path) -> Result<u8> {
    let files = collect(inputs)?;
    let mut manifest = RunManifest::new("report", None);
    let mut arts = Vec::new();
    for f in &files {
        manifest.input(f)?;
        arts.push(load(f)?);
    }
    let text = match out {
        Some(p) if p.extension().is_some_and(|x| x == "csv") => render_csv(&arts)?,
        _ => render_text(&arts),
    };
    match out {
        Some(p) => {
            write_text(p, &text)?;
            manifest.output(p)?;
            manifest.write(out_dir, "report")?;
        }
        None => print!("{text}"),
    }
    Ok(exit::PASS)
}
