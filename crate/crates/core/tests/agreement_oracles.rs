//! Agreement measures against brute-force reference computations.

use argstruct::agreement::{confusion_probability_matrix, krippendorff_alpha_u, Continuum, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Runs of equal values in a per-token indicator array: (start, len, is_unit).
fn runs(mask: &[bool], unit_ids: &[usize]) -> Vec<(usize, usize, bool)> {
    let mut out: Vec<(usize, usize, bool)> = Vec::new();
    for p in 0..mask.len() {
        let new_section = p == 0 || mask[p] != mask[p - 1] || (mask[p] && unit_ids[p] != unit_ids[p - 1]);
        if new_section {
            out.push((p, 1, mask[p]));
        } else {
            out.last_mut().unwrap().1 += 1;
        }
    }
    out
}

fn positions(s: (usize, usize, bool)) -> std::ops::Range<usize> {
    s.0..s.0 + s.1
}

fn oracle_alpha(masks: &[(Vec<bool>, Vec<usize>)]) -> f64 {
    let m = masks.len() as f64;
    let l_total = masks[0].0.len() as f64;
    let sections: Vec<Vec<(usize, usize, bool)>> = masks.iter().map(|(m, ids)| runs(m, ids)).collect();
    let mut obs = 0.0;
    for i in 0..sections.len() {
        for j in 0..sections.len() {
            if i == j {
                continue;
            }
            for &g in &sections[i] {
                for &h in &sections[j] {
                    let common = positions(g).filter(|p| positions(h).contains(p)).count();
                    let d = match (g.2, h.2) {
                        (true, true) if common > 0 => {
                            let (b1, e1, b2, e2) = (g.0 as f64, (g.0 + g.1) as f64, h.0 as f64, (h.0 + h.1) as f64);
                            (b1 - b2).powi(2) + (e1 - e2).powi(2)
                        }
                        (true, false) if common == g.1 => (g.1 * g.1) as f64,
                        (false, true) if common == h.1 => (h.1 * h.1) as f64,
                        _ => 0.0,
                    };
                    obs += d;
                }
            }
        }
    }
    let d_o = obs / (m * (m - 1.0) * l_total * l_total);
    let all: Vec<(usize, usize, bool)> = sections.concat();
    let units: Vec<usize> = all.iter().filter(|s| s.2).map(|s| s.1).collect();
    let n = units.len() as f64;
    let mut num = 0.0;
    for &l in &units {
        let shifts: f64 = (1..l).map(|k| 2.0 * (k * k) as f64).sum();
        let mut fits = 0usize;
        for gap in all.iter().filter(|s| !s.2) {
            for start in gap.0..gap.0 + gap.1 {
                if start + l <= gap.0 + gap.1 {
                    fits += 1;
                }
            }
        }
        num += (n - 1.0) * shifts + (l * l * fits) as f64;
    }
    let ml = m * l_total;
    let den = ml * (ml - 1.0) - units.iter().map(|&l| (l * (l - 1)) as f64).sum::<f64>();
    let d_e = 2.0 / ml * num / den;
    1.0 - d_o / d_e
}

fn random_continuum(rng: &mut ChaCha8Rng, len: usize) -> (Continuum, Vec<bool>, Vec<usize>) {
    let mut units = Vec::new();
    let mut mask = vec![false; len];
    let mut ids = vec![0; len];
    let mut p = rng.gen_range(0..3);
    while p < len {
        let l = rng.gen_range(1..=4).min(len - p);
        let category = if rng.gen_bool(0.7) { "c" } else { "d" };
        units.push(Unit { start: p, end: p + l, category: category.to_string() });
        if category == "c" {
            for q in p..p + l {
                mask[q] = true;
                ids[q] = units.len();
            }
        }
        p += l + rng.gen_range(0..4);
    }
    (Continuum::new(len, units).unwrap(), mask, ids)
}

#[test]
fn alpha_u_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for trial in 0..300 {
        let len = rng.gen_range(5..25);
        let m = rng.gen_range(2..5);
        let drawn: Vec<_> = (0..m).map(|_| random_continuum(&mut rng, len)).collect();
        let continua: Vec<Continuum> = drawn.iter().map(|d| d.0.clone()).collect();
        let masks: Vec<(Vec<bool>, Vec<usize>)> = drawn.iter().map(|d| (d.1.clone(), d.2.clone())).collect();
        let Ok(alpha) = krippendorff_alpha_u(&continua, "c") else { continue };
        let expected = oracle_alpha(&masks);
        assert!((alpha - expected).abs() < 1e-10, "trial {trial}: {alpha} vs {expected}");
        checked += 1;
    }
    assert!(checked > 250);
}

#[test]
fn alpha_u_ignores_annotator_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let mut continua: Vec<Continuum> = (0..3).map(|_| random_continuum(&mut rng, 20).0).collect();
        let Ok(a) = krippendorff_alpha_u(&continua, "c") else { continue };
        continua.reverse();
        continua.swap(0, 1);
        assert!((a - krippendorff_alpha_u(&continua, "c").unwrap()).abs() < 1e-12);
    }
}

#[test]
fn cpm_matches_pair_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let labels: Vec<Vec<usize>> = (0..40).map(|_| (0..3).map(|_| rng.gen_range(0..4)).collect()).collect();
    let cpm = confusion_probability_matrix(&labels, &["a", "b", "c", "d"]).unwrap();
    let mut counts = [[0.0f64; 4]; 4];
    for row in &labels {
        for a in 0..row.len() {
            for b in a + 1..row.len() {
                counts[row[a]][row[b]] += 1.0;
                counts[row[b]][row[a]] += 1.0;
            }
        }
    }
    for (r, row) in counts.iter().enumerate() {
        let total: f64 = row.iter().sum();
        for (c, n) in row.iter().enumerate() {
            assert!((cpm.matrix[r][c] - n / total).abs() < 1e-10);
        }
        assert!((cpm.matrix[r].iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
