use std::io::{self, Write};

use serde_json::{json, Value};
use terwilliger_core::analysis::{Analysis, SweepReport, SweepRow};
use terwilliger_core::character::CharTable;
use terwilliger_core::wedderburn::CorollaryAudit;

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn braces(xs: &[u64]) -> String {
    format!("{{{}}}", xs.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

/// Fixed-precision rendering with negative zero folded to zero.
fn num(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

pub fn analysis_value(a: &Analysis) -> Value {
    let classes: Vec<Value> = a
        .classes
        .iter()
        .map(|c| json!({"label": c.label.to_string(), "rep": c.rep, "size": c.size, "centralizer": c.centralizer}))
        .collect();
    let characters: Vec<Value> =
        a.char_table.rows.iter().map(|r| json!({"label": r.label.to_string(), "degree": r.degree})).collect();
    json!({
        "n": a.params.n(),
        "s": a.params.s(),
        "tau": a.params.tau(),
        "dims": {"t0": a.dims.t0, "t": a.dims.t, "t_tilde": a.dims.t_tilde, "formula": a.dims.formula},
        "triply_transitive": a.triply_transitive,
        "blocks": {"rowsum": a.blocks_rowsum, "closedform": a.blocks_closedform},
        "checks": a.checks,
        "provenance": a.closure.as_ref().map(|c| c.provenance.as_str()),
        "rounds": a.closure.as_ref().map(|c| c.rounds),
        "basis_size_history": a.closure.as_ref().map(|c| c.history.clone()),
        "identity_class": a.identity_class.to_string(),
        "classes": classes,
        "case_counts": a.case_counts,
        "characters": characters,
        "half_case_firings": a.census.half_case_firings,
        "pass": a.passed(),
    })
}

pub fn analysis_json(out: &mut dyn Write, a: &Analysis) -> io::Result<()> {
    write_json(out, &analysis_value(a))
}

pub fn analysis_csv(out: &mut dyn Write, a: &Analysis) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["field", "value"])?;
    let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
    let fields = [
        ("n", a.params.n().to_string()),
        ("s", a.params.s().to_string()),
        ("tau", a.params.tau().to_string()),
        ("dim_t0", a.dims.t0.to_string()),
        ("dim_t", opt(a.dims.t)),
        ("dim_t_tilde", a.dims.t_tilde.to_string()),
        ("formula", a.dims.formula.to_string()),
        ("triply_transitive", a.triply_transitive.to_string()),
        ("blocks_rowsum", join(&a.blocks_rowsum)),
        ("blocks_closedform", join(&a.blocks_closedform)),
        ("provenance", a.closure.as_ref().map(|c| c.provenance.as_str().to_string()).unwrap_or_default()),
        ("rounds", opt(a.closure.as_ref().map(|c| c.rounds as u64))),
    ];
    for (k, v) in fields {
        w.write_record([k, v.as_str()])?;
    }
    for (k, v) in &a.checks {
        w.write_record([format!("check:{k}"), v.to_string()])?;
    }
    w.flush()
}

pub fn analysis_text(out: &mut dyn Write, a: &Analysis) -> io::Result<()> {
    let p = &a.params;
    writeln!(out, "{p}  n = {}  s = {}  tau = {}  |G| = {}", p.n(), p.s(), p.tau(), p.order())?;
    writeln!(out, "classes ({}), identity in {}:", a.classes.len(), a.identity_class)?;
    for c in &a.classes {
        writeln!(
            out,
            "  {:<5} rep {:<10} size {:<4} centralizer {}",
            c.label.to_string(),
            c.rep,
            c.size,
            c.centralizer
        )?;
    }
    let t = a.dims.t.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    writeln!(out, "dim T0 = {}  dim T = {}  dim T~ = {}  formula = {}", a.dims.t0, t, a.dims.t_tilde, a.dims.formula)?;
    if let Some(c) = &a.closure {
        writeln!(out, "closure: {} after {} rounds, ranks {:?}", c.provenance.as_str(), c.rounds, c.history)?;
    }
    writeln!(out, "triply transitive: {}", a.triply_transitive)?;
    writeln!(out, "case counts: {:?}", a.case_counts)?;
    let degrees: Vec<String> = a.char_table.rows.iter().map(|r| format!("{}:{}", r.label, r.degree)).collect();
    writeln!(out, "characters ({}): {}", degrees.len(), degrees.join(" "))?;
    writeln!(out, "blocks (row sums):    {}", braces(&a.blocks_rowsum))?;
    writeln!(out, "blocks (closed form): {}", braces(&a.blocks_closedform))?;
    for (k, v) in &a.checks {
        writeln!(out, "  [{}] {k}", if *v { "pass" } else { "FAIL" })?;
    }
    writeln!(out, "{}", if a.passed() { "PASS" } else { "FAIL" })
}

fn row_value(r: &SweepRow) -> Value {
    json!({
        "n": r.n, "s": r.s, "tau": r.tau,
        "dim_t0": r.dim_t0, "dim_t": r.dim_t, "dim_t_tilde": r.dim_t_tilde,
        "formula": r.formula, "pass": r.pass, "failures": r.failures,
    })
}

pub fn sweep_summary(r: &SweepReport) -> String {
    format!(
        "rows {}  passed {}  failed {}  half-case firings {} (odd tau {})",
        r.rows.len(),
        r.passed,
        r.failed,
        r.census.half_case_firings,
        r.census.odd_tau_firings
    )
}

pub fn sweep_json(out: &mut dyn Write, r: &SweepReport) -> io::Result<()> {
    let v = json!({
        "rows": r.rows.iter().map(row_value).collect::<Vec<_>>(),
        "passed": r.passed,
        "failed": r.failed,
        "census": r.census,
    });
    write_json(out, &v)
}

pub fn sweep_csv(out: &mut dyn Write, r: &SweepReport) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "s", "tau", "dim_t0", "dim_t", "dim_t_tilde", "formula", "pass"])?;
    for row in &r.rows {
        w.write_record([
            row.n.to_string(),
            row.s.to_string(),
            row.tau.to_string(),
            row.dim_t0.to_string(),
            row.dim_t.map(|v| v.to_string()).unwrap_or_default(),
            row.dim_t_tilde.to_string(),
            row.formula.to_string(),
            row.pass.to_string(),
        ])?;
    }
    w.flush()
}

pub fn sweep_text(out: &mut dyn Write, r: &SweepReport) -> io::Result<()> {
    writeln!(out, "{:>5} {:>5} {:>5} {:>8} {:>8} {:>8} {:>8}  pass", "n", "s", "tau", "T0", "T", "T~", "formula")?;
    for row in &r.rows {
        let t = row.dim_t.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        write!(
            out,
            "{:>5} {:>5} {:>5} {:>8} {:>8} {:>8} {:>8}  {}",
            row.n, row.s, row.tau, row.dim_t0, t, row.dim_t_tilde, row.formula, row.pass
        )?;
        if !row.failures.is_empty() {
            write!(out, "  ({})", row.failures.join(", "))?;
        }
        writeln!(out)?;
    }
    writeln!(out, "{}", sweep_summary(r))
}

pub fn audit_summary(audits: &[CorollaryAudit]) -> String {
    let agree = audits.iter().filter(|a| a.agree).count();
    format!("audited {}  agree {}  disagree {}", audits.len(), agree, audits.len() - agree)
}

pub fn audit_json(out: &mut dyn Write, audits: &[CorollaryAudit]) -> io::Result<()> {
    let agree = audits.iter().filter(|a| a.agree).count();
    let v = json!({
        "rows": audits,
        "agree": agree,
        "disagree": audits.len() - agree,
    });
    write_json(out, &v)
}

pub fn audit_csv(out: &mut dyn Write, audits: &[CorollaryAudit]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "printed_blocks", "derived_blocks", "agree", "note"])?;
    for a in audits {
        w.write_record([
            a.n.to_string(),
            join(&a.printed_blocks),
            join(&a.derived_blocks),
            a.agree.to_string(),
            a.note.clone(),
        ])?;
    }
    w.flush()
}

pub fn audit_text(out: &mut dyn Write, audits: &[CorollaryAudit]) -> io::Result<()> {
    for a in audits {
        write!(
            out,
            "n = {:<4} printed {:<24} derived {:<24} {}",
            a.n,
            braces(&a.printed_blocks),
            braces(&a.derived_blocks),
            if a.agree { "agree" } else { "DISAGREE" }
        )?;
        if !a.note.is_empty() {
            write!(out, "  {}", a.note)?;
        }
        writeln!(out)?;
    }
    writeln!(out, "{}", audit_summary(audits))
}

pub fn char_table_json(out: &mut dyn Write, t: &CharTable) -> io::Result<()> {
    let columns: Vec<Value> = t
        .columns
        .iter()
        .map(|c| json!({"label": c.label.to_string(), "rep": c.rep.to_string(), "size": c.size, "centralizer": c.centralizer}))
        .collect();
    let rows: Vec<Value> = t
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let values: Vec<Value> = r
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let z = t.numeric(i, j);
                    json!({"terms": v.terms, "symbolic": v.symbolic(), "re": num(z.re), "im": num(z.im)})
                })
                .collect();
            json!({"label": r.label.to_string(), "degree": r.degree, "values": values})
        })
        .collect();
    let v = json!({
        "n": t.params.n(),
        "s": t.params.s(),
        "tau": t.params.tau(),
        "order": t.order(),
        "columns": columns,
        "rows": rows,
    });
    write_json(out, &v)
}

pub fn char_table_csv(out: &mut dyn Write, t: &CharTable) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["character", "degree", "class", "rep", "class_size", "value", "re", "im"])?;
    for (i, r) in t.rows.iter().enumerate() {
        for (j, c) in t.columns.iter().enumerate() {
            let z = t.numeric(i, j);
            w.write_record([
                r.label.to_string(),
                r.degree.to_string(),
                c.label.to_string(),
                c.rep.to_string(),
                c.size.to_string(),
                r.values[j].symbolic(),
                num(z.re),
                num(z.im),
            ])?;
        }
    }
    w.flush()
}

pub fn char_table_text(out: &mut dyn Write, t: &CharTable) -> io::Result<()> {
    let p = &t.params;
    writeln!(out, "{p}  tau = {}  w = exp(2 pi i / {})", p.tau(), p.n())?;
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.values.iter().map(|v| v.symbolic()).collect()).collect();
    let width = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain(t.columns.iter().map(|c| c.label.to_string().len()))
        .max()
        .unwrap_or(1);
    let label_w = t.rows.iter().map(|r| r.label.to_string().len()).max().unwrap_or(1).max(5);
    write!(out, "{:label_w$}", "")?;
    for c in &t.columns {
        write!(out, " | {:width$}", c.label.to_string())?;
    }
    writeln!(out)?;
    write!(out, "{:label_w$}", "size")?;
    for c in &t.columns {
        write!(out, " | {:<width$}", c.size)?;
    }
    writeln!(out)?;
    for (r, row) in t.rows.iter().zip(&cells) {
        write!(out, "{:label_w$}", r.label.to_string())?;
        for cell in row {
            write!(out, " | {cell:width$}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
