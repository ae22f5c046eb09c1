//! Unitized alpha over a token continuum (Krippendorff 2004).
//!
//! For one category, every annotator's continuum splits into units of that
//! category and the gaps between them. Observed disagreement sums squared
//! boundary differences of overlapping units and squared lengths of units
//! that fall entirely into another annotator's gap; expected disagreement
//! pairs every unit with every position it could take in the pooled data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unit {
    pub start: usize,
    pub end: usize,
    pub category: String,
}

/// One annotator's typed token intervals over `[0, length)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Continuum {
    pub length: usize,
    pub units: Vec<Unit>,
}

impl Continuum {
    pub fn new(length: usize, mut units: Vec<Unit>) -> Result<Self> {
        units.sort_by_key(|u| (u.start, u.end));
        for u in &units {
            if u.start >= u.end || u.end > length {
                return Err(Error::UndefinedInput(format!("unit {}..{} outside continuum of length {length}", u.start, u.end)));
            }
        }
        for w in units.windows(2) {
            if w[0].end > w[1].start {
                return Err(Error::UndefinedInput(format!("units {}..{} and {}..{} overlap", w[0].start, w[0].end, w[1].start, w[1].end)));
            }
        }
        Ok(Continuum { length, units })
    }

    /// Appends continua end to end (one per document) into one continuum.
    pub fn concat(parts: &[Continuum]) -> Continuum {
        let mut offset = 0;
        let mut units = Vec::new();
        for p in parts {
            units.extend(p.units.iter().map(|u| Unit { start: u.start + offset, end: u.end + offset, category: u.category.clone() }));
            offset += p.length;
        }
        Continuum { length: offset, units }
    }

    /// Sections for `category`: `(start, length, is_unit)`, covering the continuum.
    fn sections(&self, category: &str) -> Vec<(usize, usize, bool)> {
        let mut out = Vec::new();
        let mut pos = 0;
        for u in self.units.iter().filter(|u| u.category == category) {
            if u.start > pos {
                out.push((pos, u.start - pos, false));
            }
            out.push((u.start, u.end - u.start, true));
            pos = u.end;
        }
        if pos < self.length {
            out.push((pos, self.length - pos, false));
        }
        out
    }
}

fn check(continua: &[Continuum]) -> Result<usize> {
    if continua.len() < 2 {
        return Err(Error::UndefinedInput("unitized alpha needs at least two annotators".into()));
    }
    let length = continua[0].length;
    if length == 0 {
        return Err(Error::UndefinedInput("empty continuum".into()));
    }
    if continua.iter().any(|c| c.length != length) {
        return Err(Error::UndefinedInput("annotators' continua differ in length".into()));
    }
    Ok(length)
}

/// Observed and expected disagreement `(D_o, D_e)` for one category.
pub fn unitized_disagreement(continua: &[Continuum], category: &str) -> Result<(f64, f64)> {
    let length = check(continua)? as f64;
    let m = continua.len() as f64;
    let sections: Vec<Vec<(usize, usize, bool)>> = continua.iter().map(|c| c.sections(category)).collect();

    let mut observed = 0.0;
    for (i, si) in sections.iter().enumerate() {
        for (j, sj) in sections.iter().enumerate() {
            if i == j {
                continue;
            }
            for &(bg, lg, ug) in si {
                for &(bh, lh, uh) in sj {
                    observed += section_distance(bg, lg, ug, bh, lh, uh);
                }
            }
        }
    }
    let d_o = observed / (m * (m - 1.0) * length * length);

    let units: Vec<usize> = sections.iter().flatten().filter(|s| s.2).map(|s| s.1).collect();
    let gaps: Vec<usize> = sections.iter().flatten().filter(|s| !s.2).map(|s| s.1).collect();
    let n_units = units.len() as f64;
    let mut numerator = 0.0;
    for &l in &units {
        let lf = l as f64;
        let within_gaps: f64 = gaps.iter().filter(|&&g| g >= l).map(|&g| (g - l + 1) as f64).sum();
        numerator += (n_units - 1.0) / 3.0 * (2.0 * lf.powi(3) - 3.0 * lf * lf + lf) + lf * lf * within_gaps;
    }
    let ml = m * length;
    let denominator = ml * (ml - 1.0) - units.iter().map(|&l| (l * l.saturating_sub(1)) as f64).sum::<f64>();
    let d_e = if denominator > 0.0 { 2.0 / ml * numerator / denominator } else { 0.0 };
    Ok((d_o, d_e))
}

fn section_distance(bg: usize, lg: usize, ug: bool, bh: usize, lh: usize, uh: bool) -> f64 {
    let (bg, lg, bh, lh) = (bg as f64, lg as f64, bh as f64, lh as f64);
    let (eg, eh) = (bg + lg, bh + lh);
    match (ug, uh) {
        (true, true) if bg < eh && bh < eg => (bg - bh).powi(2) + (eg - eh).powi(2),
        (true, false) if bh <= bg && eg <= eh => lg * lg,
        (false, true) if bg <= bh && eh <= eg => lh * lh,
        _ => 0.0,
    }
}

pub fn krippendorff_alpha_u(continua: &[Continuum], category: &str) -> Result<f64> {
    let (d_o, d_e) = unitized_disagreement(continua, category)?;
    if d_e == 0.0 {
        return Err(Error::Degenerate(format!("no expected disagreement for `{category}`")));
    }
    Ok(1.0 - d_o / d_e)
}

/// Alpha over several categories: one minus summed observed over summed
/// expected disagreement.
pub fn joint_alpha_u(continua: &[Continuum], categories: &[&str]) -> Result<f64> {
    let mut d_o = 0.0;
    let mut d_e = 0.0;
    for c in categories {
        let (o, e) = unitized_disagreement(continua, c)?;
        d_o += o;
        d_e += e;
    }
    if d_e == 0.0 {
        return Err(Error::Degenerate("no expected disagreement".into()));
    }
    Ok(1.0 - d_o / d_e)
}
