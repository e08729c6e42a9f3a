use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::module::{z2_cohomology, FgInvModule, ModDesc};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Coherent,
    Crystalline,
    Etale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffStatus {
    Unknown,
    ForcedIso,
    ForcedZero,
    /// Forced to have the recorded rank, without being an isomorphism.
    ForcedRank,
    Supplied,
}

/// `d_page : E^{from} → E^{to}`; `rank` is the length of the image once known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Differential {
    pub page: u32,
    pub from: [u32; 2],
    pub to: [u32; 2],
    pub status: DiffStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
}

/// Page `E_r^{p,q}` of the Hochschild–Serre spectral sequence for a `Z/2` action,
/// `cells[q][p]`, displayed for `0 ≤ p < columns` and `0 ≤ q < rows`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPage {
    pub coefficients: Coefficients,
    pub p: u64,
    pub page: u32,
    pub columns: u32,
    pub rows: u32,
    pub cells: Vec<Vec<ModDesc>>,
    pub differentials: Vec<Differential>,
}

/// Cohomology of the quotient, `H^n` for `n < degrees.len()` and zero above.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abutment {
    pub degrees: Vec<ModDesc>,
}

impl Abutment {
    pub fn new(degrees: Vec<ModDesc>) -> Self {
        Self { degrees }
    }

    fn at(&self, n: u32) -> ModDesc {
        self.degrees.get(n as usize).cloned().unwrap_or_default()
    }
}

/// Result of forcing: the input page with its differentials marked, and the next page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forced {
    pub marked: SpectralPage,
    pub next: SpectralPage,
}

impl SpectralPage {
    /// Cell with `p ≥ 1` columns extended 2-periodically past the displayed grid.
    pub fn cell(&self, p: u32, q: u32) -> ModDesc {
        if q >= self.rows {
            return ModDesc::zero();
        }
        let p = if p < self.columns { p } else { 1 + (p - 1) % 2 };
        self.cells[q as usize][p as usize].clone()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("page serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// `E_2^{p,q} = H^p(Z/2, H^q)` for the given rows `H^0, H^1, …`.
pub fn build_e2(rows: &[FgInvModule], columns: u32, coefficients: Coefficients) -> Result<SpectralPage> {
    let p = rows.first().map_or(2, |m| m.p);
    if rows.iter().any(|m| m.p != p) {
        return Err(Error::InvalidParameter("rows over different primes".into()));
    }
    let cells = rows
        .iter()
        .map(|m| (0..columns).map(|i| z2_cohomology(m, i)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut page = SpectralPage { coefficients, p, page: 2, columns, rows: rows.len() as u32, cells, differentials: vec![] };
    page.differentials = d2_arrows(&page).into_iter().map(|(from, to)| unknown(from, to)).collect();
    Ok(page)
}

fn unknown(from: [u32; 2], to: [u32; 2]) -> Differential {
    Differential { page: 2, from, to, status: DiffStatus::Unknown, rank: None }
}

/// Drawn `d_2` arrows: nonzero source and target, target at most one column past the grid.
fn d2_arrows(page: &SpectralPage) -> Vec<([u32; 2], [u32; 2])> {
    let mut out = Vec::new();
    for q in (1..page.rows).rev() {
        for p in 0..page.columns.saturating_sub(1) {
            if !page.cell(p, q).is_zero() && !page.cell(p + 2, q - 1).is_zero() {
                out.push(([p, q], [p + 2, q - 1]));
            }
        }
    }
    out
}

/// Representative column of a `d_2` source, using the 2-periodicity for `p ≥ 1`.
fn class(p: u32) -> u32 {
    if p <= 2 {
        p
    } else {
        1 + (p - 1) % 2
    }
}

#[derive(Clone, Copy)]
enum Range {
    Fixed(u32),
    Upto(u32),
}

fn arrow_range(src: &ModDesc, dst: &ModDesc) -> std::result::Result<Range, String> {
    if src.is_zero() || dst.is_zero() {
        return Ok(Range::Fixed(0));
    }
    let src_free = src.torsion.is_empty();
    let dst_free = dst.torsion.is_empty();
    if dst_free && dst.rank > 0 && src.rank == 0 {
        return Ok(Range::Fixed(0));
    }
    if src.rank > 0 && dst.rank > 0 {
        return Err("map between free modules".into());
    }
    if (!src_free && src.rank > 0) || !src.is_elementary() || !dst.is_elementary() || dst.rank > 0 {
        return Err("cells outside free/elementary pattern".into());
    }
    let cap = if src_free { src.rank } else { src.torsion_length() };
    Ok(Range::Upto(cap.min(dst.torsion_length())))
}

/// `E_3` cell given outgoing and incoming `d_2` ranks.
fn next_cell(c: &ModDesc, out: u32, inc: u32) -> Option<ModDesc> {
    if out == 0 && inc == 0 {
        return Some(c.clone());
    }
    if c.torsion.is_empty() {
        if inc > 0 || out > c.rank {
            return None;
        }
        let mut scaled = vec![0; (c.rank - out) as usize];
        scaled.extend(std::iter::repeat_n(1, out as usize));
        return Some(ModDesc { rank: c.rank, scaled, torsion: vec![] }.normalized());
    }
    if c.rank > 0 || !c.is_elementary() {
        return None;
    }
    let len = c.torsion_length().checked_sub(out + inc)?;
    Some(ModDesc::elementary(len))
}

pub fn force_differentials(page: &SpectralPage, abutment: &Abutment) -> Result<Forced> {
    force_differentials_with(page, abutment, &[])
}

/// Determine every `d_2` from the abutment when exactly one assignment of ranks is
/// consistent with it. Entries of `supplied` fix the rank of the arrow leaving their source.
pub fn force_differentials_with(page: &SpectralPage, abutment: &Abutment, supplied: &[Differential]) -> Result<Forced> {
    if page.page != 2 {
        return Err(Error::Unsupported(format!("cannot force: page {} (only E_2 is supported)", page.page)));
    }
    if page.columns < 3 {
        return Err(Error::Unsupported("cannot force: need at least three columns".into()));
    }
    let rows = page.rows;
    let span = abutment.degrees.len() as u32 + 2 * rows + 6;
    // unknown ranks keyed by (class, q)
    let mut keys = Vec::new();
    let mut ranges = Vec::new();
    for q in 1..rows {
        for c in 0..=2 {
            let range = arrow_range(&page.cell(c, q), &page.cell(c + 2, q - 1))
                .map_err(|why| Error::Unsupported(format!("cannot force d_2 from ({c},{q}): {why}")))?;
            let range = match supplied.iter().find(|d| d.page == 2 && class(d.from[0]) == c && d.from[1] == q) {
                Some(d) => Range::Fixed(d.rank.unwrap_or(0)),
                None => range,
            };
            keys.push((c, q));
            ranges.push(range);
        }
    }
    let mut solutions: Vec<BTreeMap<(u32, u32), u32>> = Vec::new();
    let mut unresolved_higher = Vec::new();
    let mut assign: Vec<u32> = ranges.iter().map(|r| if let Range::Fixed(v) = r { *v } else { 0 }).collect();
    loop {
        let rho: BTreeMap<(u32, u32), u32> = keys.iter().copied().zip(assign.iter().copied()).collect();
        if let Some(higher) = evaluate(page, abutment, &rho, span) {
            solutions.push(rho);
            unresolved_higher = higher;
        }
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == keys.len() {
                break;
            }
            let top = match ranges[i] {
                Range::Fixed(_) => {
                    i += 1;
                    continue;
                }
                Range::Upto(t) => t,
            };
            if assign[i] < top {
                assign[i] += 1;
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == keys.len() {
            break;
        }
    }
    match solutions.len() {
        0 => Err(Error::Unsupported("cannot force: no assignment of differentials matches the abutment".into())),
        1 => {
            if !unresolved_higher.is_empty() {
                return Err(Error::Unsupported(format!(
                    "cannot force: higher differentials between nonzero cells {unresolved_higher:?}"
                )));
            }
            Ok(finish(page, &solutions[0]))
        }
        _ => {
            let mut open = Vec::new();
            for &(c, q) in &keys {
                if solutions.iter().any(|s| s[&(c, q)] != solutions[0][&(c, q)]) {
                    open.push(format!("d_2 from ({c},{q})"));
                }
            }
            Err(Error::Unsupported(format!("cannot force: unresolved {}", open.join(", "))))
        }
    }
}

fn rho_at(rho: &BTreeMap<(u32, u32), u32>, p: u32, q: u32) -> u32 {
    if q == 0 {
        0
    } else {
        rho.get(&(class(p), q)).copied().unwrap_or(0)
    }
}

fn e3_cell(page: &SpectralPage, rho: &BTreeMap<(u32, u32), u32>, p: u32, q: u32) -> Option<ModDesc> {
    let out = rho_at(rho, p, q);
    let inc = if p >= 2 && q + 1 < page.rows { rho_at(rho, p - 2, q + 1) } else { 0 };
    next_cell(&page.cell(p, q), out, inc)
}

/// Checks one assignment; returns the higher differentials left between nonzero cells.
fn evaluate(
    page: &SpectralPage,
    abutment: &Abutment,
    rho: &BTreeMap<(u32, u32), u32>,
    span: u32,
) -> Option<Vec<([u32; 2], [u32; 2])>> {
    let mut e3 = BTreeMap::new();
    for p in 0..span + 2 * page.rows {
        for q in 0..page.rows {
            e3.insert((p, q), e3_cell(page, rho, p, q)?);
        }
    }
    for n in 0..span {
        let h = abutment.at(n);
        let pieces: Vec<&ModDesc> = (0..page.rows.min(n + 1)).map(|q| &e3[&(n - q, q)]).collect();
        if pieces.iter().map(|c| c.rank).sum::<u32>() != h.rank {
            return None;
        }
        // the bottom piece is a submodule of H^n
        if pieces[0].torsion_length() > h.torsion_length() {
            return None;
        }
        if h.rank == 0 && pieces.iter().map(|c| c.torsion_length()).sum::<u32>() != h.torsion_length() {
            return None;
        }
    }
    let mut higher = Vec::new();
    for k in 3..=page.rows {
        for q in k - 1..page.rows {
            for p in 0..span {
                let t = (p + k, q + 1 - k);
                if !e3[&(p, q)].is_zero() && e3.get(&t).is_some_and(|c| !c.is_zero()) {
                    higher.push(([p, q], [t.0, t.1]));
                }
            }
        }
    }
    Some(higher)
}

fn finish(page: &SpectralPage, rho: &BTreeMap<(u32, u32), u32>) -> Forced {
    let mut marked = page.clone();
    marked.differentials = d2_arrows(page)
        .into_iter()
        .map(|(from, to)| {
            let r = rho_at(rho, from[0], from[1]);
            let (src, dst) = (page.cell(from[0], from[1]), page.cell(to[0], to[1]));
            let status = if r == 0 {
                DiffStatus::ForcedZero
            } else if src.rank == 0 && dst.rank == 0 && r == src.torsion_length() && r == dst.torsion_length() {
                DiffStatus::ForcedIso
            } else {
                DiffStatus::ForcedRank
            };
            Differential { page: 2, from, to, status, rank: Some(r) }
        })
        .collect();
    let cells = (0..page.rows)
        .map(|q| (0..page.columns).map(|p| e3_cell(page, rho, p, q).expect("checked assignment")).collect())
        .collect();
    let next = SpectralPage { page: 3, cells, differentials: vec![], ..page.clone() };
    Forced { marked, next }
}

fn summand(c: Coefficients, p: u64, scale: u32) -> String {
    let base = match c {
        Coefficients::Etale => format!("\\mathbb{{Z}}_{p}"),
        _ => "W(k)".to_string(),
    };
    match scale {
        0 => base,
        e => format!("{}{base}", p.pow(e)),
    }
}

fn torsion_name(c: Coefficients, p: u64, e: u32) -> String {
    match (c, e) {
        (Coefficients::Etale, _) => format!("\\mathbb{{Z}}/{}", p.pow(e)),
        (_, 1) => "k".to_string(),
        (_, e) => format!("W_{e}(k)"),
    }
}

/// LaTeX-style name of a cell, e.g. `W(k)^{\oplus 2}` or `W(k)\oplus2W(k)`.
pub fn cell_name(c: Coefficients, p: u64, m: &ModDesc) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<(String, usize)> = Vec::new();
    let names = m
        .scaling()
        .into_iter()
        .map(|s| summand(c, p, s))
        .chain(m.torsion.iter().map(|&e| torsion_name(c, p, e)));
    for name in names {
        match parts.last_mut() {
            Some((last, count)) if *last == name => *count += 1,
            _ => parts.push((name, 1)),
        }
    }
    parts
        .into_iter()
        .map(|(name, count)| if count == 1 { name } else { format!("{name}^{{\\oplus {count}}}") })
        .collect::<Vec<_>>()
        .join("\\oplus")
}

/// Markdown grid with rows listed from the top `q` down, as figures are drawn.
pub fn render_markdown(page: &SpectralPage) -> String {
    let kind = match page.coefficients {
        Coefficients::Coherent => "coherent",
        Coefficients::Crystalline => "crystalline",
        Coefficients::Etale => "étale",
    };
    let mut out = format!("E_{} page, {kind} coefficients, p = {}\n\n", page.page, page.p);
    out.push_str("| q \\ p |");
    for p in 0..page.columns {
        let _ = write!(out, " {p} |");
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(page.columns as usize));
    out.push('\n');
    for q in (0..page.rows).rev() {
        let _ = write!(out, "| {q} |");
        for p in 0..page.columns {
            let _ = write!(out, " ${}$ |", cell_name(page.coefficients, page.p, &page.cells[q as usize][p as usize]));
        }
        out.push('\n');
    }
    if !page.differentials.is_empty() {
        out.push('\n');
        for d in &page.differentials {
            let status = serde_json::to_value(d.status).expect("status serializes");
            let _ = write!(out, "- d_{}: ({},{}) -> ({},{}) {}", d.page, d.from[0], d.from[1], d.to[0], d.to[1], status.as_str().unwrap_or(""));
            if let (DiffStatus::ForcedRank, Some(r)) = (d.status, d.rank) {
                let _ = write!(out, " (rank {r})");
            }
            out.push('\n');
        }
    }
    out
}
