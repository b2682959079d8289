//! Per-`(m, k)` reports, batch tables and the verify-mode cross-checks.
//!
//! CSV columns, in order:
//! `family,m,k,status,error,group_order,chi_S,orientable_S,minus_identity,`
//! `fundamental_domain,chi_bipolar,orientable_bipolar,multiplicities,`
//! `domain_multiplicities,planes,pinning,area_lower_over_pi,`
//! `area_upper_over_pi,embedded,verification`.
//! List-valued columns are joined with `;`; planes read
//! `label:equal/partial/transversal/indeterminate`.

use std::fmt::Write as _;

use nalgebra::Matrix4;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipolar::domain::format_rational;
use crate::bipolar::{
    area_bounds, closed_form_area_bounds, closed_form_chi_bipolar, embeddedness_verdict, fundamental_domain_decision,
    EmbeddednessVerdict, FundamentalDomain, LawsonSurface,
};
use crate::complex::{check_free, closed_form_chi, deck_involution, euler_characteristic_formula, minus_identity_face_map};
use crate::exterior::EPS;
use crate::group::{minus_identity_status, polygon_symmetry_subgroup, MinusIdentityStatus, ReflectionGroup};
use crate::lattice::{lattice_reflection, r_q, Family, LatticeConfig};
use crate::normal_form::normal_form_group;
use crate::{ComplexKind, Error};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 20] = [
    "family",
    "m",
    "k",
    "status",
    "error",
    "group_order",
    "chi_S",
    "orientable_S",
    "minus_identity",
    "fundamental_domain",
    "chi_bipolar",
    "orientable_bipolar",
    "multiplicities",
    "domain_multiplicities",
    "planes",
    "pinning",
    "area_lower_over_pi",
    "area_upper_over_pi",
    "embedded",
    "verification",
];

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub verify: bool,
    pub allow_excluded: bool,
    pub cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { verify: false, allow_excluded: false, cap: crate::group::DEFAULT_CAP }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexMultiplicity {
    pub label: String,
    /// On `S` or `S̄`.
    pub base: usize,
    /// On the decided fundamental domain.
    pub domain: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneSummary {
    pub label: String,
    pub branched: bool,
    pub classes: usize,
    pub equal: usize,
    pub partial: usize,
    pub transversal: usize,
    pub indeterminate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipolarReport {
    pub family: Family,
    pub m: u32,
    pub k: u32,
    pub group_order: usize,
    #[serde(rename = "chi_S")]
    pub chi_s: i64,
    #[serde(rename = "orientable_S")]
    pub orientable_s: bool,
    pub minus_identity: MinusIdentityStatus,
    pub fundamental_domain: ComplexKind,
    pub chi_bipolar: i64,
    pub orientable_bipolar: bool,
    pub multiplicities: Vec<VertexMultiplicity>,
    pub planes: Vec<PlaneSummary>,
    pub pinning: Option<String>,
    pub area_lower_over_pi: String,
    pub area_upper_over_pi: String,
    pub embedded: EmbeddednessVerdict,
    pub verification: Vec<CheckResult>,
}

impl BipolarReport {
    pub fn all_checks_pass(&self) -> bool {
        self.verification.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.verification.iter().filter(|c| c.status == CheckStatus::Fail).map(|c| c.name).collect()
    }
}

/// A computed report plus the objects it was derived from.
pub struct Analysis {
    pub surface: LawsonSurface,
    pub domain: FundamentalDomain,
    pub report: BipolarReport,
}

pub fn validate(cfg: &LatticeConfig, opts: &RunOptions) -> Result<(), Error> {
    if cfg.is_excluded() && !opts.allow_excluded {
        return Err(Error::ExcludedCase);
    }
    Ok(())
}

/// Full pipeline for one `(family, m, k)`. In verify mode a failing check
/// is recorded in the report, not turned into an error.
pub fn analyze(family: Family, m: u32, k: u32, opts: &RunOptions) -> Result<Analysis, Error> {
    let cfg = LatticeConfig::new(m, k)?;
    validate(&cfg, opts)?;
    let surface = LawsonSurface::new(family, cfg, opts.cap)?;
    let domain = fundamental_domain_decision(&surface, EPS)?;
    let bounds = area_bounds(&surface, &domain)?;

    let mut multiplicities = Vec::new();
    let mut planes = Vec::new();
    for (v, p) in surface.points().iter().enumerate() {
        let mu = surface.multiplicity(v)?;
        let on_domain = surface.classes_at(&domain.complex, &p.image)?.len();
        multiplicities.push(VertexMultiplicity { label: p.label.clone(), base: mu.count, domain: on_domain });
        let c = surface.classify_planes(&domain.complex, v, EPS)?;
        planes.push(PlaneSummary {
            label: c.label,
            branched: c.branched,
            classes: c.classes.len(),
            equal: c.counts.equal,
            partial: c.counts.partial,
            transversal: c.counts.transversal,
            indeterminate: c.counts.indeterminate,
        });
    }

    let mut report = BipolarReport {
        family,
        m,
        k,
        group_order: surface.group().order(),
        chi_s: surface.s().euler_characteristic(),
        orientable_s: surface.s().is_orientable(),
        minus_identity: domain.minus_identity,
        fundamental_domain: domain.kind,
        chi_bipolar: domain.chi,
        orientable_bipolar: domain.orientable,
        multiplicities,
        planes,
        pinning: domain.pinning.as_ref().map(|p| format!("{}:{}", p.label, p.multiplicity)),
        area_lower_over_pi: format_rational(&bounds.lower),
        area_upper_over_pi: format_rational(&bounds.upper),
        embedded: embeddedness_verdict(&surface, &domain)?,
        verification: Vec::new(),
    };
    if opts.verify {
        report.verification = run_checks(&surface, &domain)?;
    }
    Ok(Analysis { surface, domain, report })
}

pub fn run_single(family: Family, m: u32, k: u32, opts: &RunOptions) -> Result<BipolarReport, Error> {
    let report = analyze(family, m, k, opts)?.report;
    if opts.verify && !report.all_checks_pass() {
        return Err(Error::CrossCheck(report.failed_checks().join(", ")));
    }
    Ok(report)
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name, status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail: detail.into() }
}

fn skipped(name: &'static str, detail: impl Into<String>) -> CheckResult {
    CheckResult { name, status: CheckStatus::Skipped, detail: detail.into() }
}

fn close(a: &Matrix4<f64>, b: &Matrix4<f64>) -> bool {
    (a - b).abs().max() <= 1e-9
}

/// Expected `−𝟙₄` status: ξ has it (even) iff `m, k` are both even; η with
/// even `k` has it (both parities) iff `m` is even; η with odd `k` has it
/// (odd) iff `m` is even.
pub fn expected_minus_identity(family: Family, cfg: &LatticeConfig) -> MinusIdentityStatus {
    let (m_even, k_even) = (cfg.m().is_multiple_of(2), cfg.k().is_multiple_of(2));
    match family {
        Family::Xi if m_even && k_even => MinusIdentityStatus::PresentEven,
        Family::Eta if m_even && k_even => MinusIdentityStatus::PresentMixed,
        Family::Eta if m_even => MinusIdentityStatus::PresentOdd,
        _ => MinusIdentityStatus::Absent,
    }
}

/// Expected `|G|`: `2mk`, or `4mk` for η with odd `k`.
pub fn expected_group_order(family: Family, cfg: &LatticeConfig) -> usize {
    let base = 2 * cfg.m() as usize * cfg.k() as usize;
    match family {
        Family::Eta if cfg.k() % 2 == 1 => 2 * base,
        _ => base,
    }
}

fn parity_evidence_agrees(a: &ReflectionGroup, b: &ReflectionGroup) -> bool {
    a.elements().iter().all(|e| b.index_of(&e.matrix).is_some_and(|i| b.element(i).parity == e.parity))
}

/// Edge `i` of the polygon, as `(P-index, Q-index)` of its lattice circle,
/// or `None` for `γ_Q`.
fn edge_lattice_indices(family: Family) -> [Option<(i64, i64)>; 4] {
    match family {
        Family::Xi => [Some((0, 0)), Some((1, 0)), Some((1, 1)), Some((0, 1))],
        Family::Eta => [Some((1, 0)), Some((1, 1)), Some((0, 1)), None],
    }
}

/// All verify-mode cross-checks.
pub fn run_checks(surface: &LawsonSurface, domain: &FundamentalDomain) -> Result<Vec<CheckResult>, Error> {
    let family = surface.family;
    let cfg = surface.cfg;
    let group = surface.group();
    let s = surface.s();
    let in_range = !cfg.is_excluded();
    let mut out = Vec::new();

    let nf = normal_form_group(family, &cfg)?;
    let expected = expected_group_order(family, &cfg);
    out.push(check(
        "group_paths",
        group.same_elements(&nf) && group.order() == expected && parity_evidence_agrees(group, &nf),
        format!("closure {} / normal form {} / expected {}", group.order(), nf.order(), expected),
    ));

    let lattice_ok = edge_lattice_indices(family).iter().enumerate().all(|(i, idx)| {
        let expected = match idx {
            Some((p, q)) => lattice_reflection(&cfg, *p, *q),
            None => r_q(),
        };
        close(&group.generators()[i], &expected) && close(&nf.generators()[i], &expected)
    });
    out.push(check("lattice_reflections", lattice_ok, "edge reflections match lattice formulas"));

    let sym = polygon_symmetry_subgroup(group, surface.polygon()).order();
    out.push(check("polygon_symmetry", sym == 1, format!("|G^Γ| = {sym}")));

    let formula = euler_characteristic_formula(surface.polygon().angle_denominators(), group.order(), sym)?;
    let closed = closed_form_chi(family, &cfg);
    let combinatorial = s.euler_characteristic();
    out.push(check(
        "chi_triple",
        formula == closed && closed == combinatorial,
        format!("V-E+F {combinatorial}, formula {formula}, closed form {closed}"),
    ));

    let by_parity = group.is_orientable_quotient();
    let by_colouring = s.is_orientable();
    let expected_orientable = family == Family::Xi || cfg.k() % 2 == 1;
    out.push(check(
        "orientability_routes",
        by_parity == by_colouring && by_colouring == expected_orientable,
        format!("parity {by_parity}, colouring {by_colouring}"),
    ));

    match surface.cover() {
        Some(cover) => {
            let free = check_free(cover, &deck_involution(cover)).is_ok();
            let ok = free && cover.is_orientable() && cover.euler_characteristic() == 2 * combinatorial;
            out.push(check(
                "double_cover",
                ok,
                format!("chi {} = 2 * {combinatorial}, deck involution free {free}", cover.euler_characteristic()),
            ));
        }
        None => out.push(skipped("double_cover", "S is orientable")),
    }

    let (p_vertex, q_vertex) = match family {
        Family::Xi => (0, 1),
        Family::Eta => (1, 2),
    };
    let mut mult_ok = true;
    let mut detail = Vec::new();
    for v in 0..surface.points().len() {
        let r = surface.multiplicity(v)?;
        mult_ok &= r.count == r.orbit_prediction && r.count == r.class_count;
        detail.push(format!("{}={}/{}/{}", r.label, r.count, r.orbit_prediction, r.class_count));
    }
    mult_ok &= surface.multiplicity(p_vertex)?.count == cfg.k() as usize;
    mult_ok &= surface.multiplicity(q_vertex)?.count == cfg.m() as usize;
    out.push(check("multiplicity_routes", mult_ok, detail.join(";")));

    let mut stable = true;
    for v in 0..surface.points().len() {
        let reference = surface.classify_planes(&domain.complex, v, EPS)?;
        for eps in [1e-6, 1e-12] {
            stable &= surface.classify_planes(&domain.complex, v, eps)?.pairs == reference.pairs;
        }
    }
    out.push(check("plane_stability", stable, "classification identical at eps 1e-6, 1e-9, 1e-12"));

    let status = minus_identity_status(group);
    let expected_status = expected_minus_identity(family, &cfg);
    out.push(check("minus_identity_rule", status == expected_status, format!("{status} (expected {expected_status})")));

    if domain.kind.is_quotient() {
        let base = surface.base_domain();
        let free = minus_identity_face_map(group, base).and_then(|map| check_free(base, &map));
        out.push(check("quotient_free", free.is_ok(), format!("{:?}", free.err())));
    } else {
        out.push(skipped("quotient_free", "no quotient"));
    }

    let expected_chi = closed_form_chi_bipolar(family, &cfg);
    let chi_ok = domain.chi == expected_chi && (domain.pinning.is_some() || !in_range);
    out.push(check(
        "chi_bipolar",
        chi_ok,
        format!("{} on {} (expected {expected_chi}), pinned {}", domain.chi, domain.kind, domain.pinning.is_some()),
    ));

    out.push(check("bipolar_orientable", domain.orientable, format!("{}", domain.orientable)));

    let derived = area_bounds(surface, domain)?;
    let closed = closed_form_area_bounds(family, &cfg);
    out.push(check(
        "area_bounds",
        derived == closed && derived.lower < derived.upper,
        format!(
            "derived [{}, {}) closed [{}, {})",
            format_rational(&derived.lower),
            format_rational(&derived.upper),
            format_rational(&closed.lower),
            format_rational(&closed.upper)
        ),
    ));

    if in_range {
        let verdict = embeddedness_verdict(surface, domain)?;
        out.push(check("embeddedness", verdict == EmbeddednessVerdict::NotEmbedded, format!("{verdict:?}")));
    } else {
        out.push(skipped("embeddedness", "excluded case"));
    }
    Ok(out)
}

/// Inclusive range `A..B`.
pub fn parse_range(s: &str) -> Result<(u32, u32), Error> {
    let err = || Error::InvalidRange(s.to_string());
    let (a, b) = s.split_once("..").ok_or_else(err)?;
    let a: u32 = a.trim().parse().map_err(|_| err())?;
    let b: u32 = b.trim().parse().map_err(|_| err())?;
    if a < 2 || a > b {
        return Err(err());
    }
    Ok((a, b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchRow {
    pub m: u32,
    pub k: u32,
    pub status: &'static str,
    pub error: Option<String>,
    #[serde(skip)]
    pub exit_code: i32,
    pub report: Option<BipolarReport>,
}

/// One row per `(m, k)`, `m` ascending then `k`; `(2, 2)` is left out unless
/// excluded cases are allowed. Rows are computed in parallel.
pub fn run_batch(family: Family, m_range: (u32, u32), k_range: (u32, u32), opts: &RunOptions) -> Vec<BatchRow> {
    let pairs: Vec<(u32, u32)> = (m_range.0..=m_range.1)
        .flat_map(|m| (k_range.0..=k_range.1).map(move |k| (m, k)))
        .filter(|&(m, k)| opts.allow_excluded || (m, k) != (2, 2))
        .collect();
    pairs
        .par_iter()
        .map(|&(m, k)| match run_single(family, m, k, opts) {
            Ok(report) => BatchRow { m, k, status: "ok", error: None, exit_code: 0, report: Some(report) },
            Err(e) => {
                let report = match &e {
                    Error::CrossCheck(_) => analyze(family, m, k, opts).ok().map(|a| a.report),
                    _ => None,
                };
                BatchRow { m, k, status: "failed", error: Some(e.to_string()), exit_code: e.exit_code(), report }
            }
        })
        .collect()
}

/// Exit code for a batch: 0 if every row succeeded, else the largest row code.
pub fn batch_exit_code(rows: &[BatchRow]) -> i32 {
    rows.iter().map(|r| r.exit_code).max().unwrap_or(0)
}

#[derive(Serialize)]
struct SingleJson<'a> {
    schema_version: u32,
    report: &'a BipolarReport,
}

#[derive(Serialize)]
struct BatchJson<'a> {
    schema_version: u32,
    family: Family,
    rows: &'a [BatchRow],
}

pub fn report_json(report: &BipolarReport) -> String {
    serde_json::to_string_pretty(&SingleJson { schema_version: SCHEMA_VERSION, report }).expect("serializable")
}

pub fn batch_json(family: Family, rows: &[BatchRow]) -> String {
    serde_json::to_string_pretty(&BatchJson { schema_version: SCHEMA_VERSION, family, rows }).expect("serializable")
}

fn csv_record(family: Family, m: u32, k: u32, status: &str, error: &str, r: Option<&BipolarReport>) -> Vec<String> {
    let mut rec = vec![family.to_string(), m.to_string(), k.to_string(), status.to_string(), error.to_string()];
    match r {
        None => rec.extend(std::iter::repeat_n(String::new(), CSV_COLUMNS.len() - 5)),
        Some(r) => {
            let join = |items: Vec<String>| items.join(";");
            rec.extend([
                r.group_order.to_string(),
                r.chi_s.to_string(),
                r.orientable_s.to_string(),
                r.minus_identity.to_string(),
                r.fundamental_domain.to_string(),
                r.chi_bipolar.to_string(),
                r.orientable_bipolar.to_string(),
                join(r.multiplicities.iter().map(|v| format!("{}={}", v.label, v.base)).collect()),
                join(r.multiplicities.iter().map(|v| format!("{}={}", v.label, v.domain)).collect()),
                join(
                    r.planes
                        .iter()
                        .map(|p| format!("{}:{}/{}/{}/{}", p.label, p.equal, p.partial, p.transversal, p.indeterminate))
                        .collect(),
                ),
                r.pinning.clone().unwrap_or_default(),
                r.area_lower_over_pi.clone(),
                r.area_upper_over_pi.clone(),
                serde_json::to_value(r.embedded).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                join(
                    r.verification
                        .iter()
                        .map(|c| format!("{}={}", c.name, serde_json::to_value(c.status).unwrap().as_str().unwrap()))
                        .collect(),
                ),
            ]);
        }
    }
    rec
}

fn write_csv(records: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for rec in records {
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn report_csv(report: &BipolarReport) -> String {
    write_csv(vec![csv_record(report.family, report.m, report.k, "ok", "", Some(report))])
}

pub fn batch_csv(family: Family, rows: &[BatchRow]) -> String {
    write_csv(
        rows.iter()
            .map(|r| csv_record(family, r.m, r.k, r.status, r.error.as_deref().unwrap_or(""), r.report.as_ref()))
            .collect(),
    )
}

pub fn report_markdown(r: &BipolarReport) -> String {
    let mut s = String::new();
    writeln!(s, "## Bipolar {}({}, {})", r.family, r.m, r.k).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "| quantity | value |").unwrap();
    writeln!(s, "|---|---|").unwrap();
    let rows = [
        ("group order", r.group_order.to_string()),
        ("chi(S)", r.chi_s.to_string()),
        ("S orientable", r.orientable_s.to_string()),
        ("-1 status", r.minus_identity.to_string()),
        ("fundamental domain", r.fundamental_domain.to_string()),
        ("chi(bipolar)", r.chi_bipolar.to_string()),
        ("bipolar orientable", r.orientable_bipolar.to_string()),
        ("pinning", r.pinning.clone().unwrap_or_else(|| "none".into())),
        ("area / pi", format!("[{}, {})", r.area_lower_over_pi, r.area_upper_over_pi)),
        ("embedded", format!("{:?}", r.embedded)),
    ];
    for (k, v) in rows {
        writeln!(s, "| {k} | {v} |").unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "| vertex | mult. (base) | mult. (domain) | branched | equal | partial | transversal | indet. |").unwrap();
    writeln!(s, "|---|---|---|---|---|---|---|---|").unwrap();
    for (mu, p) in r.multiplicities.iter().zip(&r.planes) {
        writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} |",
            mu.label, mu.base, mu.domain, p.branched, p.equal, p.partial, p.transversal, p.indeterminate
        )
        .unwrap();
    }
    if !r.verification.is_empty() {
        writeln!(s).unwrap();
        writeln!(s, "| check | status | detail |").unwrap();
        writeln!(s, "|---|---|---|").unwrap();
        for c in &r.verification {
            writeln!(s, "| {} | {:?} | {} |", c.name, c.status, c.detail).unwrap();
        }
    }
    s
}

pub fn batch_markdown(family: Family, rows: &[BatchRow]) -> String {
    let mut s = String::new();
    writeln!(s, "| family | m | k | status | domain | chi | area / pi | embedded |").unwrap();
    writeln!(s, "|---|---|---|---|---|---|---|---|").unwrap();
    for row in rows {
        match &row.report {
            Some(r) => writeln!(
                s,
                "| {family} | {} | {} | {} | {} | {} | [{}, {}) | {:?} |",
                row.m, row.k, row.status, r.fundamental_domain, r.chi_bipolar, r.area_lower_over_pi, r.area_upper_over_pi, r.embedded
            ),
            None => writeln!(
                s,
                "| {family} | {} | {} | {} | {} | | | |",
                row.m,
                row.k,
                row.status,
                row.error.as_deref().unwrap_or("")
            ),
        }
        .unwrap();
    }
    s
}
