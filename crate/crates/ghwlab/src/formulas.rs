//! Closed-form weight evaluators and the combinatorial profile maximizers
//! behind them. Everything here is exact integer arithmetic; evaluators
//! refuse out-of-hypothesis inputs instead of extrapolating.

use crate::code::CyclicCode;
use crate::error::GhwError;
use crate::field::{Fe, FieldSpec};
use crate::subspace;

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// The largest size of the intersection of an l-dimensional F_q-subspace
/// of F_{q^m} with a fixed half-order coset of the multiplicative group.
pub fn max_class_intersection(q: u64, m: u32, l: u32) -> Result<u128, GhwError> {
    if l > m {
        return Err(GhwError::LengthOutOfRange { l, m });
    }
    let q = q as u128;
    if 2 * l <= m {
        return Ok(q.pow(l) - 1);
    }
    if m % 2 != 0 {
        return Err(GhwError::HypothesisNotMet(format!(
            "intersection bound above the midpoint needs even m, got m = {m}"
        )));
    }
    Ok((q.pow(l) - 1) / 2 + (q.pow(m / 2) - q.pow(l - m / 2)) / 2)
}

/// Brute-force counterpart of [`max_class_intersection`]: maximum of
/// |H ∩ C_i| over all l-dimensional F_q-subspaces H of F_Q, for the
/// half-order classes (class index i ∈ {0, 1}).
pub fn max_intersection_oracle(
    spec: &FieldSpec,
    class_index: u64,
    l: u32,
    cap: u128,
) -> Result<u128, GhwError> {
    let m = spec.m() as usize;
    let q = spec.q();
    let sub = spec.subfield();
    let mut best: u128 = 0;
    for space in subspace::enumerate(q, m, l as usize, cap)? {
        // walk every element of the subspace
        let mut coeffs = vec![0u16; space.dim()];
        let mut count: u128 = 0;
        loop {
            let mut v = vec![0u16; m];
            for (ci, row) in coeffs.iter().zip(&space.rows) {
                for (slot, &x) in v.iter_mut().zip(row) {
                    *slot = sub.add(*slot, sub.mul(*ci, x));
                }
            }
            let mut elem = Fe::ZERO;
            for (j, &c) in v.iter().enumerate() {
                elem = spec.add(elem, spec.mul(sub.lift(c), spec.gamma_pow(j as u64)));
            }
            if !elem.is_zero() && spec.discrete_log(elem).unwrap() % 2 == class_index {
                count += 1;
            }
            let mut i = 0;
            while i < coeffs.len() {
                coeffs[i] += 1;
                if (coeffs[i] as u64) < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == coeffs.len() {
                break;
            }
        }
        best = best.max(count);
    }
    Ok(best)
}

/// A nonincreasing intersection profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile(pub Vec<u32>);

impl Profile {
    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

/// One exchange move: bump slot i by one, drop slot j by one (i < j).
/// Preserves the profile sum and moves strictly up in the slot order.
pub fn exchange_step(profile: &Profile, i: usize, j: usize, m: u32) -> Result<Profile, GhwError> {
    let l = &profile.0;
    if i >= j || j >= l.len() {
        return Err(GhwError::HypothesisNotMet("need i < j within the profile".into()));
    }
    let upper = if i == 0 { m } else { l[i - 1] };
    if l[i] >= upper {
        return Err(GhwError::HypothesisNotMet("slot i is already saturated".into()));
    }
    if l[j] < 1 {
        return Err(GhwError::HypothesisNotMet("slot j is already zero".into()));
    }
    let mut out = l.clone();
    out[i] += 1;
    out[j] -= 1;
    Ok(Profile(out))
}

/// s-index for the single-class (N = 1) branch split: the unique s with
/// (t-s-1)m < r <= (t-s)m.
pub fn branch_index(t: usize, m: u32, r: usize) -> usize {
    t - ceil_div(r, m as usize)
}

/// Optimal intersection profile for the e = t, single-class case, and the
/// power sum Σ q^{v_h} it achieves.
pub fn optimal_profile_single_class(
    q: u64,
    t: usize,
    m: u32,
    r: usize,
) -> Result<(Profile, u128), GhwError> {
    if t as u64 > q - 1 {
        return Err(GhwError::HypothesisNotMet(format!(
            "need t <= q-1, got t = {t}, q = {q}"
        )));
    }
    if r < 1 || r > t * m as usize {
        return Err(GhwError::RankOutOfRange { r, k: t * m as usize });
    }
    let s = branch_index(t, m, r);
    let mut v = vec![r as u32; s];
    v.push((t - s - 1) as u32 * m);
    for _ in 0..t - s - 1 {
        v.push(r as u32 - m);
    }
    let q = q as u128;
    let mut value = s as u128 * q.pow(r as u32) + q.pow((t - s - 1) as u32 * m);
    if s < t - 1 {
        value += (t - s - 1) as u128 * q.pow(r as u32 - m);
    }
    Ok((Profile(v), value))
}

/// Optimal dual-side profile for the e = t, two-class case, and the value
/// Σ f(u_h) it achieves.
pub fn optimal_profile_two_class(
    q: u64,
    t: usize,
    m: u32,
    r: usize,
) -> Result<(Profile, u128), GhwError> {
    if q % 2 == 0 || m % 2 != 0 {
        return Err(GhwError::HypothesisNotMet(format!(
            "two-class case needs q odd and m even, got q = {q}, m = {m}"
        )));
    }
    let k = t * m as usize;
    if r < 1 || r > k {
        return Err(GhwError::RankOutOfRange { r, k });
    }
    let rp = k - r;
    let s = rp / m as usize;
    let mut u = vec![m; s];
    u.push((rp - s * m as usize) as u32);
    for _ in 0..t - s - 1 {
        u.push(0);
    }
    let value = s as u128 * max_class_intersection(q, m, m)?
        + max_class_intersection(q, m, (rp - s * m as usize) as u32)?;
    Ok((Profile(u), value))
}

/// Optimal profile over the e slots for the e > t progression case, and
/// the power sum Σ q^{w_h}.
pub fn optimal_profile_progression(
    q: u64,
    e: u64,
    t: usize,
    m: u32,
    r: usize,
) -> Result<(Profile, u128), GhwError> {
    if e as usize <= t {
        return Err(GhwError::HypothesisNotMet(format!(
            "progression case needs e > t, got e = {e}, t = {t}"
        )));
    }
    let k = t * m as usize;
    if r < 1 || r > k {
        return Err(GhwError::RankOutOfRange { r, k });
    }
    let s = branch_index(t, m, r);
    let qq = q as u128;
    if s == t - 1 {
        let mut w = vec![r as u32; s];
        w.extend(std::iter::repeat(0).take(e as usize - s));
        let value = s as u128 * qq.pow(r as u32) + (e as u128 - s as u128);
        Ok((Profile(w), value))
    } else {
        let mut w = vec![r as u32; s];
        w.push((t - s - 1) as u32 * m);
        w.extend(std::iter::repeat(r as u32 - m).take(e as usize - s - 1));
        let value = s as u128 * qq.pow(r as u32)
            + qq.pow((t - s - 1) as u32 * m)
            + (e as u128 - s as u128 - 1) * qq.pow(r as u32 - m);
        Ok((Profile(w), value))
    }
}

/// Which closed form applies to a code instance, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FormulaKind {
    /// e = t, N = 1.
    EqualSplitSingleClass,
    /// e = t, N = 2, q odd, m even.
    EqualSplitTwoClass,
    /// e > t, N = 1, residues an arithmetic progression mod e.
    ProgressionSingleClass,
}

/// Whether the residue set forms an arithmetic progression mod e.
pub fn is_arithmetic_progression(delta: &[u64], e: u64) -> bool {
    let t = delta.len();
    if t <= 2 {
        return true;
    }
    let set: std::collections::BTreeSet<u64> = delta.iter().map(|&d| d % e).collect();
    for &start in &set {
        for d in 1..e {
            let run: std::collections::BTreeSet<u64> =
                (0..t as u64).map(|j| (start + j * d) % e).collect();
            if run == set {
                return true;
            }
        }
    }
    false
}

pub fn classify(code: &CyclicCode) -> Option<FormulaKind> {
    let q = code.spec().q();
    let m = code.spec().m();
    let e = code.params().e;
    let t = code.params().t;
    let n_classes = code.derived().class_count;
    if !code.derived().divisibility_ok {
        return None;
    }
    if e as usize == t {
        match n_classes {
            1 if t as u64 <= q - 1 => Some(FormulaKind::EqualSplitSingleClass),
            2 if q % 2 == 1 && m % 2 == 0 => Some(FormulaKind::EqualSplitTwoClass),
            _ => None,
        }
    } else if n_classes == 1
        && e <= q - 1
        && is_arithmetic_progression(&code.params().delta, e)
    {
        Some(FormulaKind::ProgressionSingleClass)
    } else {
        None
    }
}

fn exact_div(num: u128, den: u128) -> u64 {
    assert_eq!(num % den, 0, "closed form division {num}/{den} not exact");
    (num / den) as u64
}

/// Closed-form d_r. `kind` must match the instance (see [`classify`]).
pub fn closed_form(
    kind: FormulaKind,
    q: u64,
    m: u32,
    e: u64,
    t: usize,
    delta_gcd: u64,
    r: usize,
) -> Result<u64, GhwError> {
    let k = t * m as usize;
    if r < 1 || r > k {
        return Err(GhwError::RankOutOfRange { r, k });
    }
    let qq = q as u128;
    let qm = qq.pow(m);
    let de = delta_gcd as u128;
    match kind {
        FormulaKind::EqualSplitSingleClass => {
            if e as usize != t {
                return Err(GhwError::HypothesisNotMet("needs e = t".into()));
            }
            if t as u64 > q - 1 {
                return Err(GhwError::HypothesisNotMet(format!(
                    "needs t <= q-1, got t = {t}, q = {q}"
                )));
            }
            let s = branch_index(t, m, r);
            let num = (qm - 1) * (t - s) as u128 - (qq.pow((t - s) as u32 * m - r as u32) - 1);
            Ok(exact_div(num, t as u128 * de))
        }
        FormulaKind::EqualSplitTwoClass => {
            if e as usize != t {
                return Err(GhwError::HypothesisNotMet("needs e = t".into()));
            }
            if q % 2 == 0 || m % 2 != 0 {
                return Err(GhwError::HypothesisNotMet(format!(
                    "needs q odd and m even, got q = {q}, m = {m}"
                )));
            }
            let s = branch_index(t, m, r);
            let half = m / 2;
            // sub-branch split at (t - s - 1/2) m, kept integral as 2r vs (2(t-s)-1)m
            let num = if 2 * r as u32 <= (2 * (t - s) as u32 - 1) * m {
                let ex = (t - s) as u32 * m - half - r as u32;
                (qm - 1) * (t - s) as u128 - (qq.pow(ex) + 1) * (qq.pow(half) - 1)
            } else {
                (qm - 1) * (t - s) as u128 - 2 * (qq.pow((t - s) as u32 * m - r as u32) - 1)
            };
            Ok(exact_div(num, t as u128 * de))
        }
        FormulaKind::ProgressionSingleClass => {
            if e as usize <= t {
                return Err(GhwError::HypothesisNotMet("needs e > t".into()));
            }
            let ee = e as u128;
            let num = if r <= m as usize {
                (qm - 1) * (ee - t as u128 + 1)
                    - (ee - t as u128 + 1) * (qq.pow(m - r as u32) - 1)
            } else {
                let s = branch_index(t, m, r);
                debug_assert!(s <= t - 2);
                (qm - 1) * (ee - s as u128) - (qq.pow((t - s) as u32 * m - r as u32) - 1)
            };
            Ok(exact_div(num, ee * de))
        }
    }
}

/// Closed-form d_r for a built instance; refuses when no form applies.
pub fn closed_form_for(code: &CyclicCode, r: usize) -> Result<u64, GhwError> {
    let kind = classify(code).ok_or_else(|| {
        GhwError::HypothesisNotMet(format!(
            "no closed form for e = {}, t = {}, N = {}",
            code.params().e,
            code.params().t,
            code.derived().class_count
        ))
    })?;
    closed_form(
        kind,
        code.spec().q(),
        code.spec().m(),
        code.params().e,
        code.params().t,
        code.derived().delta_gcd,
        r,
    )
}

/// Solve for the dependent-slot coefficients of the variable change used
/// in the progression case: each slot h > t is a combination of the first
/// t slots, and under an arithmetic-progression residue set every
/// coefficient is nonzero.
pub fn lambda_matrix(code: &CyclicCode) -> Result<Vec<Vec<Fe>>, GhwError> {
    let spec = code.spec();
    let t = code.params().t;
    let e = code.params().e as usize;
    if e == t {
        return Ok(Vec::new());
    }
    let g = code.derived().g;
    let betas = &code.derived().beta_pows;
    // row i (1-based power i): y_i coefficients g^i β_j^i
    let row = |i: usize| -> Vec<Fe> {
        (0..t)
            .map(|j| spec.mul(spec.pow(g, i as u64), spec.pow(betas[j], i as u64)))
            .collect()
    };
    // transpose of the change-of-variables matrix, one solve per extra slot
    let mt: Vec<Vec<Fe>> = {
        let rows: Vec<Vec<Fe>> = (1..=t).map(row).collect();
        (0..t)
            .map(|c| (0..t).map(|r| rows[r][c]).collect())
            .collect()
    };
    let mut out = Vec::with_capacity(e - t);
    for h in t + 1..=e {
        let rhs = row(h);
        out.push(solve(spec, &mt, &rhs)?);
    }
    Ok(out)
}

fn solve(spec: &FieldSpec, mat: &[Vec<Fe>], rhs: &[Fe]) -> Result<Vec<Fe>, GhwError> {
    let n = mat.len();
    let mut a: Vec<Vec<Fe>> = mat
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = r.clone();
            row.push(b);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or(GhwError::SingularTransform)?;
        a.swap(col, piv);
        let inv = spec.inv(a[col][col]);
        for c in col..=n {
            a[col][c] = spec.mul(a[col][c], inv);
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col];
                for c in col..=n {
                    let s = spec.mul(f, a[col][c]);
                    a[i][c] = spec.sub_elem(a[i][c], s);
                }
            }
        }
    }
    Ok(a.iter().map(|r| r[n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{CodeParams, CyclicCode};
    use crate::field::build_field;
    use std::sync::Arc;

    #[test]
    fn intersection_bound_values() {
        assert_eq!(max_class_intersection(3, 2, 0).unwrap(), 0);
        assert_eq!(max_class_intersection(3, 2, 2).unwrap(), 4);
        assert_eq!(max_class_intersection(3, 4, 3).unwrap(), 16);
        assert!(max_class_intersection(3, 2, 3).is_err());
    }

    #[test]
    fn intersection_oracle_agrees_q9() {
        let f = build_field(3, 1, 2).unwrap();
        for i in 0..2u64 {
            for l in 0..=2u32 {
                let got = max_intersection_oracle(&f, i, l, 1 << 20).unwrap();
                assert_eq!(got, max_class_intersection(3, 2, l).unwrap(), "i={i} l={l}");
            }
        }
    }

    #[test]
    fn increment_function_nondecreasing() {
        // f(l) - f(l-1) must be nondecreasing in l
        for (q, m) in [(3u64, 2u32), (3, 4), (3, 6), (5, 2), (5, 4), (5, 6), (7, 2), (7, 4), (7, 6), (9, 2), (9, 4), (9, 6)] {
            let mut prev: Option<u128> = None;
            for l in 1..=m {
                let g = max_class_intersection(q, m, l).unwrap()
                    - max_class_intersection(q, m, l - 1).unwrap();
                if let Some(p) = prev {
                    assert!(g >= p, "q={q} m={m} l={l}");
                }
                prev = Some(g);
            }
        }
    }

    #[test]
    fn exchange_step_examples() {
        let p = exchange_step(&Profile(vec![1, 1]), 0, 1, 2).unwrap();
        assert_eq!(p.0, vec![2, 0]);
        let p = exchange_step(&Profile(vec![2, 2, 1]), 0, 2, 3).unwrap();
        assert_eq!(p.0, vec![3, 2, 0]);
        assert!(exchange_step(&Profile(vec![2, 0]), 0, 1, 2).is_err());
    }

    fn f_sum(q: u64, m: u32, l: &[u32]) -> u128 {
        l.iter()
            .map(|&x| max_class_intersection(q, m, x).unwrap())
            .sum()
    }

    #[test]
    fn exchange_never_decreases_f_sum() {
        let (q, m, t) = (3u64, 4u32, 3usize);
        // all nonincreasing profiles over t slots
        let mut profiles = Vec::new();
        for a in 0..=m {
            for b in 0..=a {
                for c in 0..=b {
                    profiles.push(vec![a, b, c]);
                }
            }
        }
        for l in &profiles {
            for i in 0..t {
                for j in i + 1..t {
                    if let Ok(p2) = exchange_step(&Profile(l.clone()), i, j, m) {
                        assert!(
                            f_sum(q, m, &p2.0) >= f_sum(q, m, l),
                            "exchange dropped the sum at {l:?} ({i},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn slot_order_orders_f_sums() {
        // within each fixed-sum family, the lexicographic slot order
        // must sort the f-sums, exhaustively for t <= 3, m <= 4, q = 3
        for t in 1..=3usize {
            for m in 1..=4u32 {
                let mut profiles: Vec<Vec<u32>> = Vec::new();
                fn gen(t: usize, m: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
                    if cur.len() == t {
                        out.push(cur.clone());
                        return;
                    }
                    let hi = cur.last().copied().unwrap_or(m);
                    for v in 0..=hi {
                        cur.push(v);
                        gen(t, m, cur, out);
                        cur.pop();
                    }
                }
                gen(t, m, &mut Vec::new(), &mut profiles);
                if m % 2 != 0 {
                    // the f bound needs even m above the midpoint; restrict
                    profiles.retain(|p| p.iter().all(|&x| 2 * x <= m));
                }
                for a in &profiles {
                    for b in &profiles {
                        let sa: u32 = a.iter().sum();
                        if sa != b.iter().sum::<u32>() {
                            continue;
                        }
                        if a > b {
                            assert!(
                                f_sum(3, m, a) >= f_sum(3, m, b),
                                "m={m} {a:?} vs {b:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn single_class_profile_examples() {
        let (p, v) = optimal_profile_single_class(3, 2, 3, 2).unwrap();
        assert_eq!(p.0, vec![2, 0]);
        assert_eq!(v, 10);
        let (p, v) = optimal_profile_single_class(3, 1, 3, 3).unwrap();
        assert_eq!(p.0, vec![0]);
        assert_eq!(v, 1);
        assert!(optimal_profile_single_class(3, 3, 2, 1).is_err()); // t > q-1
    }

    #[test]
    fn two_class_profile_example() {
        let (p, v) = optimal_profile_two_class(3, 2, 2, 1).unwrap();
        assert_eq!(p.0, vec![2, 1]);
        // N_1 = (2/(tδ)) [s(q^m-1)/2 + f(1)] = 6 for the (q=3, m=2) instance
        assert_eq!(v, 4 + 2);
        assert!(optimal_profile_two_class(3, 2, 3, 1).is_err()); // m odd
    }

    #[test]
    fn progression_profile_examples() {
        // e=3, t=2, m=2, q=7
        let (_, v) = optimal_profile_progression(7, 3, 2, 2, 1).unwrap();
        assert_eq!(v, 7 + 2); // s = t-1 branch
        let (_, v) = optimal_profile_progression(7, 3, 2, 2, 3).unwrap();
        assert_eq!(v, 49 + 2 * 7); // s = 0 branch
        let (_, v) = optimal_profile_progression(7, 3, 2, 2, 4).unwrap();
        assert_eq!(v, 49 + 2 * 49);
    }

    #[test]
    fn closed_form_hierarchies() {
        // simplex
        let got: Vec<u64> = (1..=3)
            .map(|r| closed_form(FormulaKind::EqualSplitSingleClass, 2, 3, 1, 1, 1, r).unwrap())
            .collect();
        assert_eq!(got, vec![4, 6, 7]);
        // q=3, m=3, e=t=2
        let got: Vec<u64> = (1..=6)
            .map(|r| closed_form(FormulaKind::EqualSplitSingleClass, 3, 3, 2, 2, 1, r).unwrap())
            .collect();
        assert_eq!(got, vec![9, 12, 13, 22, 25, 26]);
        // q=3, m=2, e=t=2, two classes
        let got: Vec<u64> = (1..=4)
            .map(|r| closed_form(FormulaKind::EqualSplitTwoClass, 3, 2, 2, 2, 1, r).unwrap())
            .collect();
        assert_eq!(got, vec![2, 4, 6, 8]);
        // q=7, m=2, e=3, t=2 progression
        let got: Vec<u64> = (1..=4)
            .map(|r| closed_form(FormulaKind::ProgressionSingleClass, 7, 2, 3, 2, 1, r).unwrap())
            .collect();
        assert_eq!(got, vec![28, 32, 46, 48]);
    }

    #[test]
    fn progression_detection() {
        assert!(is_arithmetic_progression(&[0, 1], 5));
        assert!(is_arithmetic_progression(&[0, 2, 4], 7));
        assert!(is_arithmetic_progression(&[0], 4));
        assert!(!is_arithmetic_progression(&[0, 1, 3], 7));
        // wrap-around progressions count
        assert!(is_arithmetic_progression(&[5, 0, 2], 7)); // 5, 0, 2 step 2
    }

    #[test]
    fn lambda_matrix_nonzero_for_progression_instance() {
        let spec = Arc::new(build_field(7, 1, 2).unwrap());
        let c = CyclicCode::build(
            spec,
            CodeParams {
                e: 3,
                t: 2,
                a: 1,
                delta: vec![0, 1],
            },
        )
        .unwrap();
        let lam = lambda_matrix(&c).unwrap();
        assert_eq!(lam.len(), 1);
        assert_eq!(lam[0].len(), 2);
        assert!(lam[0].iter().all(|x| !x.is_zero()));
        // e = t gives an empty matrix
        let spec = Arc::new(build_field(3, 1, 2).unwrap());
        let c = CyclicCode::build(
            spec,
            CodeParams {
                e: 2,
                t: 2,
                a: 1,
                delta: vec![0, 1],
            },
        )
        .unwrap();
        assert!(lambda_matrix(&c).unwrap().is_empty());
    }
}
