//! q-cyclotomic cosets, minimal polynomials, cyclotomy classes and exact
//! period/quadratic sums. All character sums are kept exact in Z[ζ_p];
//! nothing here touches floating point.

use crate::error::CyclotomyError;
use crate::field::{Fe, FieldSpec};

/// Orbit of `a` under multiplication by `mult` modulo `modulus`, in orbit
/// order starting at the reduced `a`.
pub fn cyclotomic_coset(modulus: u64, mult: u64, a: u64) -> Vec<u64> {
    let a = a % modulus;
    let mut out = vec![a];
    let mut cur = a * mult % modulus;
    while cur != a {
        out.push(cur);
        cur = cur * mult % modulus;
    }
    out
}

/// Minimal polynomial of γ^{-a} over F_q, as subfield indices low..high.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPoly {
    pub a: u64,
    pub coeffs: Vec<u16>,
}

impl MinimalPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

pub fn minimal_poly(spec: &FieldSpec, a: u64) -> Result<MinimalPoly, CyclotomyError> {
    let n = spec.order() - 1;
    let neg_a = (n - a % n) % n;
    let coset = cyclotomic_coset(n, spec.q(), neg_a);
    // ∏ (x - γ^{-a q^j}), accumulated over F_Q.
    let mut poly: Vec<Fe> = vec![Fe::ONE];
    for &exp in &coset {
        let root = spec.gamma_pow(exp);
        let mut next = vec![Fe::ZERO; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = spec.add(next[i + 1], c);
            next[i] = spec.sub_elem(next[i], spec.mul(c, root));
        }
        poly = next;
    }
    let sub = spec.subfield();
    let coeffs = poly
        .iter()
        .map(|&c| sub.index_of(c).ok_or(CyclotomyError::CoefficientOutsideSubfield))
        .collect::<Result<Vec<u16>, _>>()?;
    Ok(MinimalPoly { a: a % n, coeffs })
}

/// Elements of the i-th cyclotomy class γ^i ⟨γ^N⟩ of F_Q*.
pub fn cyclotomy_class_members(
    spec: &FieldSpec,
    class_count: u64,
    index: u64,
) -> Result<Vec<Fe>, CyclotomyError> {
    let n = spec.order() - 1;
    if class_count == 0 || n % class_count != 0 {
        return Err(CyclotomyError::NotADivisor {
            divisor: class_count,
            order: n,
        });
    }
    if index >= class_count {
        return Err(CyclotomyError::ClassIndexOutOfRange {
            index,
            count: class_count,
        });
    }
    Ok((0..n / class_count)
        .map(|j| spec.gamma_pow(index + j * class_count))
        .collect())
}

/// An exact element of Z[ζ_p]: coefficients of 1, ζ, ..., ζ^{p-1}.
/// Canonical form has the last coefficient zero (via Σ_j ζ^j = 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycInt {
    p: u64,
    c: Vec<i64>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        CycInt {
            p,
            c: vec![0; p as usize],
        }
    }

    pub fn from_counts(p: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let mut v = CycInt {
            p,
            c: counts.to_vec(),
        };
        v.canonicalize();
        v
    }

    pub fn from_int(p: u64, v: i64) -> Self {
        let mut c = vec![0; p as usize];
        c[0] = v;
        CycInt { p, c }
    }

    fn canonicalize(&mut self) {
        let last = *self.c.last().unwrap();
        if last != 0 {
            for x in self.c.iter_mut() {
                *x -= last;
            }
        }
    }

    pub fn add_assign(&mut self, other: &CycInt) {
        assert_eq!(self.p, other.p);
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += b;
        }
        self.canonicalize();
    }

    pub fn scale(&self, k: i64) -> CycInt {
        CycInt {
            p: self.p,
            c: self.c.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    /// The rational-integer value, when the element lies in Z.
    pub fn as_int(&self) -> Option<i64> {
        if self.is_rational() {
            Some(self.c[0])
        } else {
            None
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }
}

/// Exact period sum Σ_{x ∈ C_0} ζ_p^{Tr(ax)} over the index-N subgroup
/// class C_0 of F_Q*, tallied into residue counts.
pub fn gauss_period(
    spec: &FieldSpec,
    class_count: u64,
    a: Fe,
) -> Result<CycInt, CyclotomyError> {
    let n = spec.order() - 1;
    if class_count == 0 || n % class_count != 0 {
        return Err(CyclotomyError::NotADivisor {
            divisor: class_count,
            order: n,
        });
    }
    let mut counts = vec![0i64; spec.p() as usize];
    let mut idx = 0;
    while idx < n {
        let x = spec.gamma_pow(idx);
        let t = spec.trace_to_base(spec.mul(a, x));
        counts[t as usize] += 1;
        idx += class_count;
    }
    Ok(CycInt::from_counts(spec.p(), &counts))
}

/// Class-indexed period sums σ_i = Σ_{y ∈ C_i} ζ_p^{Tr(y)} for all i,
/// plus the a = 0 value (Q-1)/N. η_a equals σ_{log(a) mod N}.
pub struct PeriodTable {
    pub class_count: u64,
    pub at_zero: i64,
    pub by_class: Vec<CycInt>,
}

pub fn period_table(spec: &FieldSpec, class_count: u64) -> Result<PeriodTable, CyclotomyError> {
    let n = spec.order() - 1;
    if class_count == 0 || n % class_count != 0 {
        return Err(CyclotomyError::NotADivisor {
            divisor: class_count,
            order: n,
        });
    }
    let mut tallies = vec![vec![0i64; spec.p() as usize]; class_count as usize];
    for idx in 0..n {
        let x = spec.gamma_pow(idx);
        let t = spec.trace_to_base(x);
        tallies[(idx % class_count) as usize][t as usize] += 1;
    }
    Ok(PeriodTable {
        class_count,
        at_zero: (n / class_count) as i64,
        by_class: tallies
            .iter()
            .map(|t| CycInt::from_counts(spec.p(), t))
            .collect(),
    })
}

/// Symbolic value of the quadratic sum over F_{p^s}: sign · √q, possibly
/// times i. Only signs and the rational cases feed the closed forms, so no
/// floating point is involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadSum {
    pub p: u64,
    pub s: u32,
    pub sign: i8,
    pub imaginary: bool,
}

pub fn quadratic_sum(p: u64, s: u32) -> Result<QuadSum, CyclotomyError> {
    if p == 2 {
        return Err(CyclotomyError::EvenCharacteristic);
    }
    if p % 4 == 1 {
        let sign = if (s - 1) % 2 == 0 { 1 } else { -1 };
        Ok(QuadSum {
            p,
            s,
            sign,
            imaginary: false,
        })
    } else {
        // (-1)^{s-1} i^s √q
        let base = if (s - 1) % 2 == 0 { 1i8 } else { -1 };
        if s % 2 == 0 {
            // i^s = (-1)^{s/2}
            let isign = if (s / 2) % 2 == 0 { 1 } else { -1 };
            Ok(QuadSum {
                p,
                s,
                sign: base * isign,
                imaginary: false,
            })
        } else {
            // i^s = i · (-1)^{(s-1)/2}
            let isign = if ((s - 1) / 2) % 2 == 0 { 1 } else { -1 };
            Ok(QuadSum {
                p,
                s,
                sign: base * isign,
                imaginary: true,
            })
        }
    }
}

impl QuadSum {
    /// sign · p^{s/2} when the value is a rational integer.
    pub fn rational_value(&self) -> Option<i64> {
        if self.imaginary || self.s % 2 != 0 {
            return None;
        }
        Some(self.sign as i64 * (self.p as i64).pow(self.s / 2))
    }
}

/// The bit j with quadratic sum over F_Q equal to (-1)^j q^{m/2}.
/// Defined only when the sum is rational, i.e. q odd and s·m even.
pub fn quadratic_sum_sign(spec: &FieldSpec) -> Result<u8, CyclotomyError> {
    let sm = spec.s() * spec.m();
    let qs = quadratic_sum(spec.p(), sm)?;
    match qs.rational_value() {
        Some(v) if v > 0 => Ok(0),
        Some(_) => Ok(1),
        None => Err(CyclotomyError::Irrational),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn coset_of_one_in_f8() {
        // mod 7, multiplier 2: {6, 5, 3} is the orbit of -1
        let c = cyclotomic_coset(7, 2, 6);
        assert_eq!(c.len(), 3);
        assert!(c.contains(&6) && c.contains(&5) && c.contains(&3));
    }

    #[test]
    fn minimal_poly_of_zero_exponent() {
        let f = build_field(2, 1, 3).unwrap();
        let mp = minimal_poly(&f, 0).unwrap();
        // x - 1
        assert_eq!(mp.coeffs, vec![1, 1]);
        assert_eq!(mp.degree(), 1);
    }

    #[test]
    fn minimal_poly_degree_matches_coset_f8() {
        let f = build_field(2, 1, 3).unwrap();
        let mp = minimal_poly(&f, 1).unwrap();
        assert_eq!(mp.degree(), 3);
    }

    #[test]
    fn minimal_poly_degrees_exhaustive_f27() {
        let f = build_field(3, 1, 3).unwrap();
        for a in 0..26 {
            let mp = minimal_poly(&f, a).unwrap();
            let coset = cyclotomic_coset(26, 3, (26 - a) % 26);
            assert_eq!(mp.degree(), coset.len(), "a = {a}");
            assert_eq!(f.m() as usize % mp.degree(), 0);
        }
    }

    #[test]
    fn minimal_poly_annihilates_its_root() {
        let f = build_field(3, 1, 2).unwrap();
        let sub = f.subfield();
        for a in 0..8u64 {
            let mp = minimal_poly(&f, a).unwrap();
            let root = f.gamma_pow(8 - a);
            let mut acc = Fe::ZERO;
            for (i, &c) in mp.coeffs.iter().enumerate() {
                acc = f.add(acc, f.mul(sub.lift(c), f.pow(root, i as u64)));
            }
            assert!(acc.is_zero(), "h_{a} does not vanish at γ^-{a}");
        }
    }

    #[test]
    fn classes_partition_f9() {
        let f = build_field(3, 1, 2).unwrap();
        let c0 = cyclotomy_class_members(&f, 2, 0).unwrap();
        let c1 = cyclotomy_class_members(&f, 2, 1).unwrap();
        assert_eq!(c0.len(), 4);
        assert_eq!(c1.len(), 4);
        let mut all: Vec<Fe> = c0.iter().chain(&c1).copied().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 8);
        // squares have even log index
        for x in &c0 {
            assert_eq!(f.discrete_log(*x).unwrap() % 2, 0);
        }
    }

    #[test]
    fn class_errors() {
        let f = build_field(3, 1, 2).unwrap();
        assert!(cyclotomy_class_members(&f, 3, 0).is_err());
        assert!(cyclotomy_class_members(&f, 2, 2).is_err());
    }

    #[test]
    fn single_class_periods_take_two_values() {
        // full-group sums: Q-1 at zero, -1 elsewhere
        for (p, s, m) in [(2, 1, 3), (3, 1, 2), (5, 1, 2), (3, 1, 4), (2, 2, 2), (3, 2, 2), (7, 1, 2)] {
            let f = build_field(p, s, m).unwrap();
            assert_eq!(
                gauss_period(&f, 1, Fe::ZERO).unwrap().as_int().unwrap(),
                (f.order() - 1) as i64
            );
            for idx in 0..f.order() - 1 {
                let v = gauss_period(&f, 1, f.gamma_pow(idx)).unwrap();
                assert_eq!(v.as_int().unwrap(), -1, "Q={} a=γ^{idx}", f.order());
            }
        }
    }

    #[test]
    fn two_class_periods_f9() {
        let f = build_field(3, 1, 2).unwrap();
        let e0 = gauss_period(&f, 2, Fe::ONE).unwrap();
        let e1 = gauss_period(&f, 2, f.gamma()).unwrap();
        assert_eq!(e0.as_int().unwrap(), 1);
        assert_eq!(e1.as_int().unwrap(), -2);
    }

    #[test]
    fn periods_sum_to_minus_one() {
        for (p, s, m) in [(3, 1, 2), (3, 1, 4), (5, 1, 2), (7, 1, 2), (2, 1, 4), (3, 2, 2)] {
            let f = build_field(p, s, m).unwrap();
            let n = f.order() - 1;
            for class_count in 1..=n {
                if n % class_count != 0 {
                    continue;
                }
                let mut total = CycInt::zero(p);
                for i in 0..class_count {
                    let v = gauss_period(&f, class_count, f.gamma_pow(i)).unwrap();
                    total.add_assign(&v);
                }
                assert_eq!(total.as_int(), Some(-1), "Q={} N={class_count}", f.order());
            }
        }
    }

    #[test]
    fn quadratic_sum_values() {
        // q = 5: +√5 real
        let g = quadratic_sum(5, 1).unwrap();
        assert_eq!((g.sign, g.imaginary), (1, false));
        // q = 9: +3
        let g = quadratic_sum(3, 2).unwrap();
        assert_eq!((g.sign, g.imaginary), (1, false));
        assert_eq!(g.rational_value(), Some(3));
        // q = 3: +i√3
        let g = quadratic_sum(3, 1).unwrap();
        assert_eq!((g.sign, g.imaginary), (1, true));
        assert!(quadratic_sum(2, 1).is_err());
    }

    #[test]
    fn quadratic_sum_sign_bits() {
        let f = build_field(3, 1, 2).unwrap();
        assert_eq!(quadratic_sum_sign(&f).unwrap(), 0); // +3
        let f = build_field(5, 1, 2).unwrap();
        assert_eq!(quadratic_sum_sign(&f).unwrap(), 1); // -5
        let f = build_field(3, 1, 4).unwrap();
        assert_eq!(quadratic_sum_sign(&f).unwrap(), 1); // -9
    }

    #[test]
    fn period_difference_matches_sign_bit() {
        for (p, s, m) in [(3, 1, 2), (5, 1, 2), (7, 1, 2), (3, 1, 4)] {
            let f = build_field(p, s, m).unwrap();
            let e0 = gauss_period(&f, 2, Fe::ONE).unwrap().as_int().unwrap();
            let e1 = gauss_period(&f, 2, f.gamma()).unwrap().as_int().unwrap();
            let j = quadratic_sum_sign(&f).unwrap();
            let expect = if j == 0 { 1 } else { -1 };
            let half = (f.q() as i64).pow(f.m() / 2);
            assert_eq!(e0 - e1, expect * half, "Q = {}", f.order());
        }
    }

    #[test]
    fn cycint_canonical_arithmetic() {
        let a = CycInt::from_counts(3, &[1, 2, 5]);
        assert_eq!(a.coeffs(), &[-4, -3, 0]);
        let b = CycInt::from_counts(3, &[4, 3, 0]);
        let mut s = a.clone();
        s.add_assign(&b);
        assert_eq!(s.as_int(), Some(0));
        assert!(!a.is_rational());
    }
}
