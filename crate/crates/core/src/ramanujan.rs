//! Three independent Ramanujan tests for `Cay(R, xR*)`: direct inspection of
//! the spectrum, the largest-nontrivial-eigenvalue inequality, and the
//! structural classification by ideal sizes. All comparisons are exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{build_context, coordinate_profile};
use crate::ring::{identify_small_ring, local_factorization, make_product, Elem, RingClass, RingTable};
use crate::spectra::{closed_form_spectrum_from, ClosedFormData, SpectrumMultiset};

/// `(|I_{y_i}|, |M_{y_i}|, y_i unit?)` for one nonzero coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub ideal: u64,
    pub boundary: u64,
    pub unit: bool,
}

impl ProfileEntry {
    pub fn new(ideal: u64, boundary: u64, unit: bool) -> Self {
        Self { ideal, boundary, unit }
    }

    /// `|I|/|M|`; integral since `M` is a subgroup of `I`.
    pub fn ratio(&self) -> u64 {
        self.ideal / self.boundary
    }
}

/// Sorts by ratio, then by `|I|`.
pub fn sort_profile(profile: &mut [ProfileEntry]) {
    profile.sort_by_key(|e| (e.ratio(), e.ideal, e.unit));
}

/// `R` restricted to the coordinates where `x` is nonzero.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub factors: Vec<RingTable>,
    /// Coordinates of `y` in `factors`.
    pub y: Vec<Elem>,
    /// `R' = ∏ factors` as one table, and `y` as an element of it.
    pub ring: RingTable,
    pub y_element: Elem,
}

/// Drops the local factors on which `x` vanishes. `Cay(R, xR*)` and
/// `Cay(R', yR'*)` share their eigenvalue set.
pub fn reduce_zero_coordinates(ring: &RingTable, x: Elem) -> Result<Reduction> {
    ring.check_element(x)?;
    if x == ring.zero() {
        return Err(Error::ZeroGenerator);
    }
    let fact = local_factorization(ring)?;
    let (factors, y): (Vec<RingTable>, Vec<Elem>) = fact
        .factors
        .iter()
        .zip(fact.coords(x))
        .filter(|(f, xi)| *xi != f.ring.zero())
        .map(|(f, xi)| (f.ring.clone(), xi))
        .unzip();
    let refs: Vec<&RingTable> = factors.iter().collect();
    let product = make_product(&refs)?;
    let y_element = product.embedding.element(&y);
    Ok(Reduction { factors, y, ring: product.ring, y_element })
}

/// Reduced profile of `x`, sorted.
pub fn reduced_profile(ring: &RingTable, x: Elem) -> Result<Vec<ProfileEntry>> {
    let fact = local_factorization(ring)?;
    profile_from(&ClosedFormData::new(ring, &fact, x)?)
}

fn profile_from(data: &ClosedFormData) -> Result<Vec<ProfileEntry>> {
    let mut p: Vec<ProfileEntry> = data
        .coords
        .iter()
        .filter(|c| !c.is_zero)
        .map(|c| ProfileEntry::new(c.ideal as u64, c.boundary as u64, c.is_unit))
        .collect();
    sort_profile(&mut p);
    Ok(p)
}

/// Every eigenvalue with `|λ| < k` satisfies `λ² ≤ 4(k − 1)`.
pub fn spectral_test(spec: &SpectrumMultiset, k: u64) -> Result<bool> {
    let k = k as i64;
    if !spec.contains(k) {
        return Err(Error::MissingEigenvalue(k));
    }
    let bound = 4 * (k as i128 - 1);
    Ok(spec.eigenvalues().filter(|l| l.abs() < k).all(|l| (l as i128).pow(2) <= bound))
}

/// Compares the largest non-trivial eigenvalue magnitude `k/(e − 1)`, with
/// `e` the smallest ratio above 2, against `2√(k − 1)`.
pub fn inequality_test(profile: &[ProfileEntry], k: u64) -> Result<bool> {
    if profile.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let Some(e) = profile.iter().map(ProfileEntry::ratio).filter(|&r| r > 2).min() else {
        return Ok(true);
    };
    // (k/(e−1))² ≤ 4(k−1)  ⟺  k² ≤ 4(k−1)(e−1)²
    let (k, e) = (k as u128, e as u128);
    Ok(k * k <= 4 * (k - 1) * (e - 1) * (e - 1))
}

/// Structural Ramanujan conditions, checked in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

impl Condition {
    pub fn roman(self) -> &'static str {
        match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
            Condition::IV => "iv",
            Condition::V => "v",
            Condition::VI => "vi",
            Condition::VII => "vii",
            Condition::VIII => "viii",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

/// `a ≤ b + √c` for integers, `c ≥ 0`.
fn le_plus_sqrt(a: i128, b: i128, c: i128) -> bool {
    let d = a - b;
    d <= 0 || d * d <= c
}

fn all_field_two(entries: &[ProfileEntry]) -> bool {
    entries.iter().all(|e| e.ideal == 2 && e.boundary == 1)
}

/// Classifies a reduced profile (any order; sorted internally).
pub fn condition_classifier(profile: &[ProfileEntry]) -> Option<Condition> {
    let mut p = profile.to_vec();
    sort_profile(&mut p);
    if p.is_empty() {
        return None;
    }
    if p.iter().all(|e| e.ratio() == 2) {
        return Some(Condition::I);
    }

    let all_m1 = p.iter().all(|e| e.boundary == 1);
    let tail = |k: usize| -> Option<&[ProfileEntry]> {
        (p.len() >= k && all_field_two(&p[..p.len() - k])).then(|| &p[p.len() - k..])
    };

    if all_m1 {
        if let Some(t) = tail(3) {
            let sizes: Vec<u64> = t.iter().map(|e| e.ideal).collect();
            match sizes.as_slice() {
                [3, 3, 3] => return Some(Condition::II),
                [3, 3, 4] if t[2].unit => return Some(Condition::III),
                [4, 4, 4] if t.iter().all(|e| e.unit) => return Some(Condition::IV),
                _ => {}
            }
        }
    }

    // one (9,3), one (3,1), everything else (2,1)
    let is = |e: &ProfileEntry, i: u64, m: u64| e.ideal == i && e.boundary == m;
    if p.iter().filter(|e| is(e, 9, 3)).count() == 1
        && p.iter().filter(|e| is(e, 3, 1)).count() == 1
        && p.iter().all(|e| is(e, 9, 3) || is(e, 3, 1) || is(e, 2, 1))
    {
        return Some(Condition::V);
    }

    // one (4,2); |M| = 1 elsewhere; all |I| = 2 except a final pair
    let fours: Vec<usize> = (0..p.len()).filter(|&i| is(&p[i], 4, 2)).collect();
    if fours.len() == 1 {
        let rest: Vec<ProfileEntry> = p.iter().enumerate().filter(|&(i, _)| i != fours[0]).map(|(_, e)| *e).collect();
        if rest.len() >= 2 && rest.iter().all(|e| e.boundary == 1) {
            let (head, pair) = rest.split_at(rest.len() - 2);
            let (q1, q2) = (pair[0].ideal as i128, pair[1].ideal as i128);
            if all_field_two(head) && 3 <= q1 && q1 <= q2 && le_plus_sqrt(q2, q1, q1 * (q1 - 2)) {
                return Some(Condition::VI);
            }
        }
    }

    if all_m1 {
        if let Some(t) = tail(2) {
            let (q1, q2) = (t[0].ideal as i128, t[1].ideal as i128);
            // q2 ≤ 2(q1 + √(q1(q1−2))) − 1  ⟺  q2 + 1 − 2q1 ≤ 2√(q1(q1−2))
            if 3 <= q1 && q1 <= q2 && le_plus_sqrt(q2 + 1, 2 * q1, 4 * q1 * (q1 - 2)) {
                return Some(Condition::VII);
            }
        }
    }

    let big: Vec<&ProfileEntry> = p.iter().filter(|e| e.ratio() != 2).collect();
    if big.len() == 1 && big[0].ratio() >= 3 {
        let e = big[0].ratio() as i128;
        let prod_m: i128 = p.iter().map(|x| x.boundary as i128).product();
        // ∏|M| ≤ 2(e − 1 + √(e(e−2)))  ⟺  ∏|M| − 2(e−1) ≤ 2√(e(e−2))
        if le_plus_sqrt(prod_m, 2 * (e - 1), 4 * e * (e - 2)) {
            return Some(Condition::VIII);
        }
    }
    None
}

/// Single-factor criterion: `|I_x| = 2|M_x|` or `|I_x| ≥ (|M_x|/2 + 1)²`.
pub fn local_corollary_test(ideal: u64, boundary: u64) -> bool {
    let (i, m) = (ideal as u128, boundary as u128);
    i == 2 * m || 4 * i >= (m + 2) * (m + 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamanujanReport {
    /// Degree `|xR*|`.
    pub k: u64,
    /// `4(k − 1)`, the square of the Ramanujan bound.
    pub bound_squared: u64,
    pub spectral_verdict: bool,
    pub inequality_verdict: bool,
    pub condition: Option<Condition>,
    pub reduced_profile: Vec<ProfileEntry>,
    /// Isomorphism class of each `I_{y_i}` in profile order, when `|I| ≤ 9`.
    pub ideal_classes: Vec<Option<RingClass>>,
    pub spectrum: SpectrumMultiset,
}

impl RamanujanReport {
    pub fn is_ramanujan(&self) -> bool {
        self.spectral_verdict
    }

    pub fn condition_verdict(&self) -> bool {
        self.condition.is_some()
    }
}

/// The three verdicts that failed to agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub spectral: bool,
    pub inequality: bool,
    pub condition: Option<Condition>,
    pub profile: Vec<ProfileEntry>,
    pub spectrum: SpectrumMultiset,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "spectral={}, inequality={}, condition={}, profile={:?}, spectrum={}",
            self.spectral,
            self.inequality,
            self.condition.map_or("none".to_string(), |c| c.to_string()),
            self.profile,
            self.spectrum
        )
    }
}

/// Runs all three tests; a disagreement is reported as an error.
pub fn full_report(ring: &RingTable, x: Elem) -> Result<RamanujanReport> {
    let fact = local_factorization(ring)?;
    let data = ClosedFormData::new(ring, &fact, x)?;
    let spectrum = closed_form_spectrum_from(&data)?;
    let k = data.orbit() as u64;
    let profile = profile_from(&data)?;

    let spectral = spectral_test(&spectrum, k)?;
    let inequality = inequality_test(&profile, k)?;
    let condition = condition_classifier(&profile);

    if spectral != inequality || spectral != condition.is_some() {
        return Err(Error::VerdictDisagreement(Box::new(Disagreement {
            spectral,
            inequality,
            condition,
            profile,
            spectrum,
        })));
    }

    // classes of the nonzero-coordinate ideals, in profile order
    let coords = coordinate_profile(&fact, x)?;
    let mut classes: Vec<(ProfileEntry, Option<RingClass>)> = Vec::new();
    for ((f, xi), c) in fact.factors.iter().zip(fact.coords(x)).zip(&coords) {
        if c.is_zero {
            continue;
        }
        let entry = ProfileEntry::new(c.ideal as u64, c.boundary as u64, c.is_unit);
        let class =
            if c.ideal <= 9 { Some(identify_small_ring(&build_context(&f.ring, xi)?.ideal_ring()?)) } else { None };
        classes.push((entry, class));
    }
    classes.sort_by_key(|(e, _)| (e.ratio(), e.ideal, e.unit));

    Ok(RamanujanReport {
        k,
        bound_squared: 4 * (k - 1),
        spectral_verdict: spectral,
        inequality_verdict: inequality,
        condition,
        reduced_profile: profile,
        ideal_classes: classes.into_iter().map(|(_, c)| c).collect(),
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_cyclic_ring, make_product};
    use crate::spectra::closed_form_spectrum;

    fn z(n: usize) -> RingTable {
        make_cyclic_ring(n).unwrap()
    }

    fn power(base: &RingTable, k: usize) -> RingTable {
        let refs: Vec<&RingTable> = std::iter::repeat_n(base, k).collect();
        make_product(&refs).unwrap().ring
    }

    fn all_ones(r: &RingTable, k: usize) -> Elem {
        r.element_by_label(&format!("({})", vec!["1"; k].join(", "))).unwrap()
    }

    fn pe(i: u64, m: u64, u: bool) -> ProfileEntry {
        ProfileEntry::new(i, m, u)
    }

    #[test]
    fn reduction_drops_zero_coordinates() {
        let r = make_product(&[&z(2), &z(3)]).unwrap().ring;
        let red = reduce_zero_coordinates(&r, r.element_by_label("(1, 0)").unwrap()).unwrap();
        assert_eq!(red.factors.len(), 1);
        assert!(red.factors[0].same_tables(&z(2)));
        assert_eq!(red.y, vec![1]);

        let red = reduce_zero_coordinates(&z(6), 1).unwrap();
        assert_eq!(red.factors.len(), 2);

        let r = make_product(&[&z(2), &z(2), &z(3)]).unwrap().ring;
        let red = reduce_zero_coordinates(&r, r.element_by_label("(0, 1, 2)").unwrap()).unwrap();
        assert_eq!(red.ring.order(), 6);
        assert_eq!(red.factors.iter().map(RingTable::order).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn spectral_test_examples() {
        let hex = SpectrumMultiset::from_pairs([(2, 1), (1, 2), (-1, 2), (-2, 1)]);
        assert!(spectral_test(&hex, 2).unwrap());
        let matching = SpectrumMultiset::from_pairs([(1, 2), (-1, 2)]);
        assert!(spectral_test(&matching, 1).unwrap());
        assert_eq!(spectral_test(&matching, 3).unwrap_err(), Error::MissingEigenvalue(3));

        let z3 = z(3);
        let r = power(&z3, 4);
        let spec = closed_form_spectrum(&r, all_ones(&r, 4)).unwrap();
        assert!(spec.contains(-8));
        assert!(!spectral_test(&spec, 16).unwrap());
    }

    #[test]
    fn inequality_test_examples() {
        assert!(inequality_test(&[pe(2, 1, true), pe(3, 1, true)], 2).unwrap());
        assert!(!inequality_test(&[pe(3, 1, true); 4], 16).unwrap());
        assert!(inequality_test(&[pe(2, 1, false)], 1).unwrap());
        assert_eq!(inequality_test(&[], 1).unwrap_err(), Error::EmptyProfile);
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(condition_classifier(&[pe(2, 1, true), pe(3, 1, true)]), Some(Condition::VIII));
        assert_eq!(condition_classifier(&[pe(3, 1, true); 3]), Some(Condition::II));
        assert_eq!(condition_classifier(&[pe(4, 2, false)]), Some(Condition::I));
        assert_eq!(condition_classifier(&[pe(3, 1, true); 4]), None);
        assert_eq!(
            condition_classifier(&[pe(2, 1, true), pe(4, 1, true), pe(3, 1, true), pe(3, 1, false)]),
            Some(Condition::III)
        );
        assert_eq!(condition_classifier(&[pe(4, 1, true); 3]), Some(Condition::IV));
        assert_eq!(condition_classifier(&[pe(9, 3, false), pe(3, 1, true), pe(2, 1, true)]), Some(Condition::V));
        assert_eq!(condition_classifier(&[pe(4, 2, false), pe(3, 1, true), pe(4, 1, true)]), Some(Condition::VI));
        assert_eq!(condition_classifier(&[pe(3, 1, true), pe(5, 1, true)]), Some(Condition::VII));
    }

    #[test]
    fn classifier_boundaries_are_exact() {
        // (vii) with q1 = 3: q2 ≤ 2(3 + √3) − 1 ≈ 8.46
        assert_eq!(condition_classifier(&[pe(3, 1, true), pe(8, 1, true)]), Some(Condition::VII));
        assert_eq!(condition_classifier(&[pe(3, 1, true), pe(9, 1, true)]), None);
        // (vi) with q1 = 3: q2 ≤ 3 + √3 ≈ 4.73
        assert_eq!(condition_classifier(&[pe(4, 2, true), pe(3, 1, true), pe(4, 1, true)]), Some(Condition::VI));
        assert_eq!(condition_classifier(&[pe(4, 2, true), pe(3, 1, true), pe(5, 1, true)]), None);
        // (viii) with e = 3: ∏|M| ≤ 2(2 + √3) ≈ 7.46
        assert_eq!(condition_classifier(&[pe(21, 7, false)]), Some(Condition::VIII));
        assert_eq!(condition_classifier(&[pe(24, 8, false)]), None);
    }

    #[test]
    fn classifier_agrees_with_inequality_on_synthetic_profiles() {
        // all combinations of up to four entries from a menu of shapes
        let menu = [
            pe(2, 1, true),
            pe(2, 1, false),
            pe(4, 2, false),
            pe(8, 4, false),
            pe(3, 1, true),
            pe(3, 1, false),
            pe(4, 1, true),
            pe(5, 1, true),
            pe(7, 1, true),
            pe(8, 1, true),
            pe(9, 1, true),
            pe(9, 3, false),
            pe(27, 9, false),
            pe(16, 4, false),
        ];
        let mut count = 0;
        for len in 1..=4usize {
            let mut idx = vec![0usize; len];
            loop {
                if idx.windows(2).all(|w| w[0] <= w[1]) {
                    let prof: Vec<ProfileEntry> = idx.iter().map(|&i| menu[i]).collect();
                    let k: u64 = prof.iter().map(|e| e.ideal - e.boundary).product();
                    let ineq = inequality_test(&prof, k).unwrap();
                    let cond = condition_classifier(&prof);
                    assert_eq!(ineq, cond.is_some(), "{prof:?}: inequality={ineq}, condition={cond:?}");
                    count += 1;
                }
                let mut j = len;
                loop {
                    if j == 0 {
                        break;
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < menu.len() {
                        break;
                    }
                    idx[j] = 0;
                    if j == 0 {
                        j = usize::MAX;
                        break;
                    }
                }
                if j == usize::MAX {
                    break;
                }
            }
        }
        assert!(count > 100);
    }

    #[test]
    fn corollary_examples() {
        assert!(local_corollary_test(3, 1));
        assert!(local_corollary_test(4, 2));
        assert!(local_corollary_test(8, 4));
        assert!(!local_corollary_test(27, 9));
    }

    #[test]
    fn full_reports() {
        let rep = full_report(&z(6), 1).unwrap();
        assert!(rep.spectral_verdict && rep.inequality_verdict);
        assert_eq!(rep.condition, Some(Condition::VIII));

        let z3 = z(3);
        let r4 = power(&z3, 4);
        let rep = full_report(&r4, all_ones(&r4, 4)).unwrap();
        assert!(!rep.spectral_verdict && !rep.inequality_verdict);
        assert_eq!(rep.condition, None);

        let r3 = power(&z3, 3);
        let rep = full_report(&r3, all_ones(&r3, 3)).unwrap();
        assert_eq!(rep.condition, Some(Condition::II));
        assert_eq!(rep.k, 8);

        let rep = full_report(&z(4), 2).unwrap();
        assert_eq!(rep.condition, Some(Condition::I));

        let rep = full_report(&z(8), 2).unwrap();
        assert_eq!(rep.condition, Some(Condition::I));
        assert_eq!(rep.reduced_profile, vec![pe(4, 2, false)]);
        assert_eq!(rep.ideal_classes, vec![Some(RingClass::Presented(crate::ring::PresentedKind::B, 2))]);
    }
}
