use std::fs;
use std::path::{Path, PathBuf};

use ellchain_core::chain::{
    canonical_series, count_tableaux, for_each_tableau, redistribute as twist_to, validate_lls, validate_rank1,
    LimitLinearSeries, Rank1Report, Redistribution, Tableau, ValidationReport,
};
use ellchain_core::theorems::{
    onto_certificate, petri_certificate, PetriCase, PetriParams, PoinParams, Status, Verdict, VerdictParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::output::{emit, status_name, usage, Envelope, Exit, Format};
use crate::span::Span;
use crate::table::{pairs, yes, Table};
use crate::Global;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalOut {
    pub series: LimitLinearSeries,
    pub validation: ValidationReport,
    pub rank1: Rank1Report,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableauxOut {
    pub g: i64,
    pub r: i64,
    pub d: i64,
    pub rows: i64,
    pub cols: i64,
    /// `g - (r + 1)(g - d + r)`.
    pub rho: i64,
    pub count: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tableaux: Option<Vec<Tableau>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RedistributeOut {
    pub source_degrees: Vec<i64>,
    pub redistribution: Redistribution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateOut {
    pub validation: ValidationReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank1: Option<Rank1Report>,
}

/// One line of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: VerdictParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<PetriCase>,
    pub status: Status,
    pub products: usize,
    pub certified: usize,
    pub oracle_rank: Option<usize>,
    pub diagnostics: Vec<String>,
}

impl SweepRow {
    fn of(v: Verdict) -> Self {
        SweepRow {
            products: v.dimension.as_ref().map_or(0, |d| d.products),
            certified: v.certified(),
            oracle_rank: v.oracle.as_ref().map(|o| o.rank),
            params: v.params,
            case: v.case,
            status: v.status,
            diagnostics: v.diagnostics,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOut {
    pub rows: Vec<SweepRow>,
}

fn write_out<T: Serialize>(g: &Global, env: &Envelope<T>, table: impl FnOnce() -> String) -> anyhow::Result<()> {
    let text = match g.format {
        Format::Json => env.to_json()?,
        Format::Table => table(),
    };
    emit(&text, g.out.as_ref())
}

fn orders(p: i64, exact: bool) -> String {
    if exact {
        p.to_string()
    } else {
        format!(">={p}")
    }
}

fn series_text(s: &LimitLinearSeries) -> String {
    let mut out = format!(
        "rank {}  degree {}  dimension {}  a {}  components {}\n",
        s.rank,
        s.degree,
        s.dimension,
        s.a,
        s.tables.len()
    );
    for (i, b) in s.bundles.iter().enumerate() {
        let slots: Vec<String> = b.slots.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("C{}  {}\n", i + 1, slots.join(" + ")));
    }
    let mut t = Table::new(["comp", "row", "slot", "ord_P", "ord_Q"]);
    for (i, table) in s.tables.iter().enumerate() {
        for (j, r) in table.rows.iter().enumerate() {
            t.row([
                format!("C{}", i + 1),
                (j + 1).to_string(),
                r.slot.to_string(),
                orders(r.ord_p, r.exact_p),
                orders(r.ord_q, r.exact_q),
            ]);
        }
    }
    out.push_str(&t.render());
    out
}

fn list(v: &[usize]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
    }
}

fn validation_text(r: &ValidationReport) -> String {
    let structural = if r.structural.is_empty() {
        "ok".to_string()
    } else {
        r.structural.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("; ")
    };
    pairs(&[
        ("structure", structural),
        ("degree sum", yes(r.degree_sum).into()),
        ("node orders", format!("{} (failing nodes {})", yes(r.node_orders), list(&r.failing_nodes))),
        ("degree window", format!("{} (failing components {})", yes(r.degree_window), list(&r.failing_components))),
        ("valid", yes(r.passes()).into()),
    ])
}

fn rank1_text(r: &Rank1Report) -> String {
    pairs(&[("crude", yes(r.crude).into()), ("refined", yes(r.refined).into())])
}

pub fn canonical(g: &Global, genus: usize) -> anyhow::Result<Exit> {
    let series = canonical_series(genus).map_err(|e| usage(e.to_string()))?;
    let validation = validate_lls(&series);
    let rank1 = validate_rank1(&series)?;
    let code = if validation.passes() && rank1.refined { Exit::Success } else { Exit::Failed };
    let out = CanonicalOut { series, validation, rank1 };
    write_out(g, &Envelope::new("canonical", None, &out), || {
        format!("{}\n{}{}", series_text(&out.series), validation_text(&out.validation), rank1_text(&out.rank1))
    })?;
    Ok(code)
}

pub fn tableaux(g: &Global, genus: i64, r: i64, d: i64, enumerate: bool) -> anyhow::Result<Exit> {
    let count = count_tableaux(genus, r, d).map_err(|e| usage(e.to_string()))?;
    let listed = enumerate.then(|| {
        let mut v = Vec::new();
        for_each_tableau(genus, r, d, |t| v.push(t.clone())).map(|_| v)
    });
    let tableaux = listed.transpose().map_err(|e| usage(e.to_string()))?;
    let (rows, cols) = (r + 1, genus - d + r);
    let out = TableauxOut { g: genus, r, d, rows, cols, rho: genus - rows * cols, count, tableaux };
    write_out(g, &Envelope::new("tableaux", None, &out), || {
        let mut s = format!("{count}\n");
        for t in out.tableaux.iter().flatten() {
            let lines: Vec<String> = (0..t.rows)
                .map(|i| (0..t.cols).map(|j| t.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            s.push_str(&lines.join(" / "));
            s.push('\n');
        }
        s
    })?;
    Ok(Exit::Success)
}

/// A series from a bare JSON object, a `{"series": ..}` wrapper, or an envelope around either.
pub fn load_series(path: &Path) -> anyhow::Result<LimitLinearSeries> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    for key in ["result", "series"] {
        if let Some(inner) = v.get_mut(key) {
            v = inner.take();
        }
    }
    serde_json::from_value(v).map_err(|e| usage(format!("{}: not a series: {e}", path.display())))
}

pub fn redistribute(g: &Global, file: Option<PathBuf>, genus: Option<u32>, dprime: Vec<i64>) -> anyhow::Result<Exit> {
    let series = match (file, genus) {
        (Some(f), _) => load_series(&f)?,
        (None, Some(n)) => canonical_series(n as usize)?,
        (None, None) => return Err(usage("give --series FILE or --g N")),
    };
    let red = twist_to(&series, &dprime).map_err(|e| usage(e.to_string()))?;
    let out = RedistributeOut { source_degrees: series.component_degrees(), redistribution: red };
    write_out(g, &Envelope::new("redistribute", None, &out), || {
        let r = &out.redistribution;
        let mut t = Table::new(["comp", "d_i", "d'_i", "shift", "residue", "P_thr", "Q_thr", "kept"]);
        for i in 0..r.target_degrees.len() {
            t.row([
                format!("C{}", i + 1),
                out.source_degrees[i].to_string(),
                r.target_degrees[i].to_string(),
                r.shifts[i].to_string(),
                r.residues[i].to_string(),
                r.p_thresholds[i].to_string(),
                r.q_thresholds[i].to_string(),
                r.kept_rows[i].len().to_string(),
            ]);
        }
        let total: i64 = r.bundles.iter().map(|b| b.degree()).sum();
        format!("{}total degree {total} (series degree {})\n", t.render(), r.degree)
    })?;
    Ok(Exit::Success)
}

pub fn validate(g: &Global, file: &Path) -> anyhow::Result<Exit> {
    let series = load_series(file)?;
    let validation = validate_lls(&series);
    let rank1 = (series.rank == 1).then(|| validate_rank1(&series)).transpose()?;
    let code = if validation.passes() { Exit::Success } else { Exit::Failed };
    let out = ValidateOut { validation, rank1 };
    write_out(g, &Envelope::new("validate", None, &out), || {
        let mut s = validation_text(&out.validation);
        if let Some(r) = &out.rank1 {
            s.push_str(&rank1_text(r));
        }
        s
    })?;
    Ok(code)
}

fn params_text(p: &VerdictParams) -> (&'static str, String) {
    match p {
        VerdictParams::Petri(p) => ("petri", format!("g={} r={} d={} k={}", p.g, p.r, p.d, p.k)),
        VerdictParams::Onto(p) => ("onto", format!("g={} r={} d={} h={}", p.g, p.r, p.d, p.h)),
    }
}

fn verdict_text(v: &Verdict) -> String {
    let (name, params) = params_text(&v.params);
    let mut items = vec![("theorem", name.to_string()), ("params", params)];
    if let Some(c) = v.case {
        items.push(("case", c.label().into()));
    }
    items.push(("status", status_name(v.status).into()));
    if let Some(d) = &v.dimension {
        items.push(("expected", d.expected.to_string()));
        items.push(("products", d.products.to_string()));
        items.push(("certified", d.certified.to_string()));
        items.push(("domain", d.domain.to_string()));
        items.push(("ambient", d.ambient.to_string()));
    }
    if let Some(o) = &v.oracle {
        items.push(("oracle", format!("{} (prime {}, seed {}, max over {} trials)", o.rank, o.prime, o.seed, o.trials)));
    }
    if let Some(h) = v.endo_h0 {
        items.push(("endo h0", h.to_string()));
    }
    let mut out = pairs(&items);
    if let Some(dist) = &v.distribution {
        let opt = |x: Option<i64>| x.map_or("-".to_string(), |x| x.to_string());
        let mut t = Table::new(["comp", "target", "P_thr", "Q_thr", "quoted_P", "quoted_Q", "match"]);
        for th in &dist.thresholds {
            t.row([
                format!("C{}", th.component + 1),
                dist.targets[th.component].to_string(),
                th.computed_p.to_string(),
                th.computed_q.to_string(),
                opt(th.quoted_p),
                opt(th.quoted_q),
                yes(th.matches).to_string(),
            ]);
        }
        out.push('\n');
        out.push_str(&t.render());
        out.push_str(&format!("degree sum {} of {}\n", dist.sum, dist.expected_sum));
    }
    if !v.series.is_empty() {
        let mut t = Table::new(["series", "rank", "degree", "dim", "a", "valid"]);
        for s in &v.series {
            t.row([
                s.name.clone(),
                s.rank.to_string(),
                s.degree.to_string(),
                s.dimension.to_string(),
                s.a.to_string(),
                yes(s.validation.passes()).to_string(),
            ]);
        }
        out.push('\n');
        out.push_str(&t.render());
    }
    for d in &v.diagnostics {
        out.push_str(&format!("note: {d}\n"));
    }
    out
}

fn sweep_text(rows: &[SweepRow]) -> String {
    let mut t = Table::new(["params", "case", "status", "products", "certified", "oracle"]);
    for r in rows {
        t.row([
            params_text(&r.params).1,
            r.case.map_or("-", |c| c.label()).to_string(),
            status_name(r.status).to_string(),
            r.products.to_string(),
            r.certified.to_string(),
            r.oracle_rank.map_or("-".into(), |x| x.to_string()),
        ]);
    }
    let proven = rows.iter().filter(|r| r.status == Status::Proven).count();
    format!("{}{} rows, {proven} proven\n", t.render(), rows.len())
}

fn single(s: Span, name: &str) -> anyhow::Result<i64> {
    s.single().ok_or_else(|| usage(format!("--{name} takes a range only with --sweep")))
}

fn finish_single(g: &Global, command: &str, v: Verdict) -> anyhow::Result<Exit> {
    if g.verbose {
        for d in &v.diagnostics {
            eprintln!("{d}");
        }
    }
    let code = Exit::of(v.status, true);
    write_out(g, &Envelope::new(command, Some(g.oracle()?), &v), || verdict_text(&v))?;
    Ok(code)
}

fn finish_sweep(g: &Global, command: &str, rows: Vec<SweepRow>) -> anyhow::Result<Exit> {
    let code = rows.iter().map(|r| Exit::of(r.status, false)).max().unwrap_or(Exit::Success);
    let out = SweepOut { rows };
    write_out(g, &Envelope::new(command, Some(g.oracle()?), &out), || sweep_text(&out.rows))?;
    Ok(code)
}

pub fn petri(
    g: &Global,
    gs: Span,
    rs: Span,
    ds: Option<Span>,
    ks: Option<Span>,
    sweep: bool,
    all: bool,
) -> anyhow::Result<Exit> {
    let cfg = g.oracle()?;
    let derive = |genus, r, d, k| PetriParams::derive(genus, r, d, k).map_err(|e| usage(e.to_string()));
    if !sweep {
        let (d, k) = match (ds, ks) {
            (Some(d), Some(k)) => (single(d, "d")?, single(k, "k")?),
            _ => return Err(usage("--d and --k are required without --sweep")),
        };
        let p = derive(single(gs, "g")?, single(rs, "r")?, d, k)?;
        return finish_single(g, "petri", petri_certificate(&p, &cfg));
    }
    let mut tuples = Vec::new();
    for genus in gs.iter() {
        for r in rs.iter() {
            for d in ds.unwrap_or(Span { lo: 0, hi: 4 * genus }).iter() {
                for k in ks.unwrap_or(Span { lo: 1, hi: 4 * genus }).iter() {
                    let p = derive(genus, r, d, k)?;
                    if all || p.hypothesis_holds() {
                        tuples.push(p);
                    }
                }
            }
        }
    }
    let rows = tuples.par_iter().map(|p| SweepRow::of(petri_certificate(p, &cfg))).collect();
    finish_sweep(g, "petri", rows)
}

pub fn endo(g: &Global, gs: Span, rs: Span, ds: Option<Span>, sweep: bool) -> anyhow::Result<Exit> {
    let cfg = g.oracle()?;
    if !sweep {
        let d = ds.ok_or_else(|| usage("--d is required without --sweep"))?;
        let p = PoinParams::new(single(gs, "g")?, single(rs, "r")?, single(d, "d")?).map_err(|e| usage(e.to_string()))?;
        return finish_single(g, "endo", onto_certificate(&p, &cfg));
    }
    if gs.lo < 2 || rs.lo < 1 {
        return Err(usage("sweep needs g >= 2 and r >= 1"));
    }
    let mut params = Vec::new();
    for genus in gs.iter() {
        for r in rs.iter() {
            for d in ds.unwrap_or(Span { lo: genus, hi: genus + r - 1 }).iter() {
                if let Ok(p) = PoinParams::new(genus, r, d) {
                    params.push(p);
                }
            }
        }
    }
    let rows = params.par_iter().map(|p| SweepRow::of(onto_certificate(p, &cfg))).collect();
    finish_sweep(g, "endo", rows)
}
