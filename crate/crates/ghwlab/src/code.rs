//! Parameter validation, derived quantities and the trace realization of
//! the cyclic-code family.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomy::{cyclotomic_coset, minimal_poly, period_table, CycInt, MinimalPoly};
use crate::field::{Fe, FieldSpec};
use crate::poly;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Canonical parameter key used in scan reports and dedup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CodeKey {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub e: u64,
    pub t: usize,
    pub a: u64,
    pub delta: Vec<u64>,
}

/// The free parameters (e, t, a, Δ) on top of a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub e: u64,
    pub t: usize,
    pub a: u64,
    pub delta: Vec<u64>,
}

/// Structured rejection: which assumption failed and the witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// e must divide Q-1.
    SplitNotDividing { e: u64, group_order: u64 },
    /// a must be nonzero mod Q-1.
    ZeroExponent { a: u64 },
    /// e >= t >= 1 must hold.
    SlotCountOutOfRange { e: u64, t: usize },
    /// Residues must have the stated arity.
    ResidueArity { expected: usize, got: usize },
    /// Two residues collide mod e.
    ResidueCollision { i: usize, j: usize, value: u64 },
    /// gcd of the residue differences with e is not 1.
    ResidueGcd { value: u64 },
    /// Some minimal polynomial has degree below m.
    DegreeShort { i: usize, degree: usize, m: u32 },
    /// Two minimal polynomials coincide.
    PolyCollision { i: usize, j: usize },
}

impl Rejection {
    /// Which of the three code-family assumptions was violated (1-based).
    pub fn assumption(&self) -> u8 {
        match self {
            Rejection::SplitNotDividing { .. }
            | Rejection::ZeroExponent { .. }
            | Rejection::SlotCountOutOfRange { .. } => 1,
            Rejection::ResidueArity { .. }
            | Rejection::ResidueCollision { .. }
            | Rejection::ResidueGcd { .. } => 2,
            Rejection::DegreeShort { .. } | Rejection::PolyCollision { .. } => 3,
        }
    }
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "assumption {} violated: {:?}", self.assumption(), self)
    }
}

/// Everything derived from (field, e, t, a, Δ).
#[derive(Clone, Debug)]
pub struct DerivedParams {
    /// a_i = a + (Q-1)/e · Δ_i mod Q-1.
    pub exponents: Vec<u64>,
    /// δ = gcd(Q-1, a_1, ..., a_t).
    pub delta_gcd: u64,
    /// Code length n = (Q-1)/δ.
    pub length: u64,
    /// N = gcd((Q-1)/(q-1), a·e): the number of period classes.
    pub class_count: u64,
    /// β = γ^{(Q-1)/e}.
    pub beta: Fe,
    /// β_j = β^{Δ_j}.
    pub beta_pows: Vec<Fe>,
    /// g = γ^a.
    pub g: Fe,
    /// Advisory: N ≤ √Q, under which assumption iii is automatic.
    pub small_class_shortcut: bool,
    /// Advisory: the residue gcd condition was vacuous (t = 1).
    pub gcd_vacuous: bool,
    /// δ divides (Q-1)/e, equivalently e divides n. Automatic for t ≥ 2
    /// via the residue gcd condition; can fail for vacuous-gcd t = 1
    /// instances, which the closed forms and the character-sum identity
    /// then refuse.
    pub divisibility_ok: bool,
}

/// Check the three family assumptions. Assumption iii is always checked
/// directly through the minimal polynomials, never via the N ≤ √Q
/// shortcut; that shortcut is only reported as advisory metadata.
pub fn validate(spec: &FieldSpec, params: &CodeParams) -> Result<(), Rejection> {
    let n = spec.order() - 1;
    if params.e == 0 || n % params.e != 0 {
        return Err(Rejection::SplitNotDividing {
            e: params.e,
            group_order: n,
        });
    }
    if params.a % n == 0 {
        return Err(Rejection::ZeroExponent { a: params.a });
    }
    if params.t < 1 || (params.e as usize) < params.t {
        return Err(Rejection::SlotCountOutOfRange {
            e: params.e,
            t: params.t,
        });
    }
    if params.delta.len() != params.t {
        return Err(Rejection::ResidueArity {
            expected: params.t,
            got: params.delta.len(),
        });
    }
    for i in 0..params.t {
        for j in i + 1..params.t {
            if params.delta[i] % params.e == params.delta[j] % params.e {
                return Err(Rejection::ResidueCollision {
                    i,
                    j,
                    value: params.delta[i] % params.e,
                });
            }
        }
    }
    if params.t > 1 {
        let d0 = params.delta[0];
        let mut g = params.e;
        for &d in &params.delta[1..] {
            let diff = (d + params.e - d0 % params.e) % params.e;
            g = gcd(g, diff);
        }
        if g != 1 {
            return Err(Rejection::ResidueGcd { value: g });
        }
    }
    // Assumption iii via the minimal polynomials themselves.
    let exps = exponents(spec, params);
    let mut polys: Vec<MinimalPoly> = Vec::with_capacity(params.t);
    for (i, &ai) in exps.iter().enumerate() {
        let mp = minimal_poly(spec, ai).expect("minimal polynomial construction");
        if mp.degree() != spec.m() as usize {
            return Err(Rejection::DegreeShort {
                i,
                degree: mp.degree(),
                m: spec.m(),
            });
        }
        polys.push(mp);
    }
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if polys[i].coeffs == polys[j].coeffs {
                return Err(Rejection::PolyCollision { i, j });
            }
        }
    }
    Ok(())
}

fn exponents(spec: &FieldSpec, params: &CodeParams) -> Vec<u64> {
    let n = spec.order() - 1;
    let step = n / params.e;
    params
        .delta
        .iter()
        .map(|&d| (params.a % n + step % n * (d % params.e) % n) % n)
        .collect()
}

/// Derive all secondary quantities; call after [`validate`].
pub fn derive(spec: &FieldSpec, params: &CodeParams) -> DerivedParams {
    let n = spec.order() - 1;
    let exps = exponents(spec, params);
    let mut delta_gcd = n;
    for &ai in &exps {
        delta_gcd = gcd(delta_gcd, ai);
    }
    let length = n / delta_gcd;
    let class_count = gcd(n / (spec.q() - 1), params.a % n * params.e % n);
    let divisibility_ok = (n / params.e) % delta_gcd == 0
        && class_count * (spec.q() - 1) % (params.e * delta_gcd) == 0;
    // guaranteed by the residue gcd condition whenever it actually bites
    debug_assert!(params.t == 1 || divisibility_ok);
    let beta = spec.gamma_pow(n / params.e);
    let beta_pows = params.delta.iter().map(|&d| spec.pow(beta, d)).collect();
    let sqrt_bound = class_count.checked_mul(class_count).map(|c| c <= spec.order());
    DerivedParams {
        exponents: exps,
        delta_gcd,
        length,
        class_count,
        beta,
        beta_pows,
        g: spec.gamma_pow(params.a),
        small_class_shortcut: sqrt_bound.unwrap_or(false),
        gcd_vacuous: params.t == 1,
        divisibility_ok,
    }
}

/// A built code instance: immutable, shared freely across workers.
pub struct CyclicCode {
    spec: Arc<FieldSpec>,
    params: CodeParams,
    derived: DerivedParams,
    /// Codewords of the ambient-basis vectors, k = tm rows of length n.
    basis_words: Vec<Vec<u16>>,
    /// Per-coordinate columns: columns[i][j] = c_{i+1}(basis_j).
    columns: Vec<Vec<u16>>,
    parity: Vec<u16>,
    periods: crate::cyclotomy::PeriodTable,
}

impl CyclicCode {
    pub fn build(spec: Arc<FieldSpec>, params: CodeParams) -> Result<CyclicCode, Rejection> {
        validate(&spec, &params)?;
        let derived = derive(&spec, &params);
        let t = params.t;
        let m = spec.m() as usize;
        let k = t * m;
        let n = derived.length as usize;

        let mut basis_words = Vec::with_capacity(k);
        for j in 0..t {
            for l in 0..m {
                let mut xbar = vec![Fe::ZERO; t];
                xbar[j] = spec.gamma_pow(l as u64);
                basis_words.push(codeword_raw(&spec, &derived, &xbar));
            }
        }
        let columns = (0..n)
            .map(|i| basis_words.iter().map(|w| w[i]).collect())
            .collect();

        let sub = spec.subfield();
        let mut parity = vec![sub.one()];
        for &ai in &derived.exponents {
            let mp = minimal_poly(&spec, ai).expect("minimal polynomial");
            parity = poly::mul(sub, &parity, &mp.coeffs);
        }
        debug_assert_eq!(parity.len() - 1, k);
        let (_, rem) = poly::divrem(sub, &poly::x_pow_minus_one(sub, n), &parity);
        assert!(rem.is_empty(), "parity-check polynomial does not divide x^n - 1");

        let periods = period_table(&spec, derived.class_count).expect("period table");

        Ok(CyclicCode {
            spec,
            params,
            derived,
            basis_words,
            columns,
            parity,
            periods,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedParams {
        &self.derived
    }

    pub fn length(&self) -> usize {
        self.derived.length as usize
    }

    /// Code dimension k = tm.
    pub fn dimension(&self) -> usize {
        self.params.t * self.spec.m() as usize
    }

    pub fn basis_words(&self) -> &[Vec<u16>] {
        &self.basis_words
    }

    pub fn columns(&self) -> &[Vec<u16>] {
        &self.columns
    }

    pub fn parity_check_poly(&self) -> &[u16] {
        &self.parity
    }

    pub fn generator_poly(&self) -> Vec<u16> {
        let sub = self.spec.subfield();
        let (quo, rem) = poly::divrem(
            sub,
            &poly::x_pow_minus_one(sub, self.length()),
            &self.parity,
        );
        debug_assert!(rem.is_empty());
        quo
    }

    pub fn periods(&self) -> &crate::cyclotomy::PeriodTable {
        &self.periods
    }

    pub fn key(&self) -> CodeKey {
        CodeKey {
            p: self.spec.p(),
            s: self.spec.s(),
            m: self.spec.m(),
            e: self.params.e,
            t: self.params.t,
            a: self.params.a,
            delta: self.params.delta.clone(),
        }
    }

    /// Trace codeword of a message tuple in F_Q^t.
    pub fn codeword(&self, xbar: &[Fe]) -> Vec<u16> {
        assert_eq!(xbar.len(), self.params.t, "message arity");
        codeword_raw(&self.spec, &self.derived, xbar)
    }

    /// Lift ambient coordinates in F_q^{tm} to the message tuple in F_Q^t
    /// through the fixed power basis.
    pub fn coords_to_message(&self, v: &[u16]) -> Vec<Fe> {
        let t = self.params.t;
        let m = self.spec.m() as usize;
        assert_eq!(v.len(), t * m);
        let sub = self.spec.subfield();
        (0..t)
            .map(|j| {
                let mut acc = Fe::ZERO;
                for l in 0..m {
                    let c = sub.lift(v[j * m + l]);
                    acc = self.spec.add(acc, self.spec.mul(c, self.spec.gamma_pow(l as u64)));
                }
                acc
            })
            .collect()
    }

    pub fn codeword_from_coords(&self, v: &[u16]) -> Vec<u16> {
        self.codeword(&self.coords_to_message(v))
    }

    /// The η value for an argument element, through the period table.
    pub fn eta(&self, arg: Fe) -> CycInt {
        if arg.is_zero() {
            CycInt::from_int(self.spec.p(), self.periods.at_zero)
        } else {
            let l = self.spec.discrete_log(arg).unwrap();
            self.periods.by_class[(l % self.derived.class_count) as usize].clone()
        }
    }

    /// Gram matrix of the ambient basis under ⟨x, y⟩ = Tr(Σ x_i y_i).
    pub fn gram(&self) -> Vec<Vec<u16>> {
        let t = self.params.t;
        let m = self.spec.m() as usize;
        let k = t * m;
        let mut g = vec![vec![0u16; k]; k];
        for j in 0..t {
            for l1 in 0..m {
                for l2 in 0..m {
                    let v = self
                        .spec
                        .trace_to_mid(self.spec.gamma_pow((l1 + l2) as u64));
                    g[j * m + l1][j * m + l2] = v;
                }
            }
        }
        g
    }

    /// All q^{tm} trace codewords (exhaustive; desk scale only).
    pub fn all_trace_codewords(&self) -> Vec<Vec<u16>> {
        let k = self.dimension();
        let q = self.spec.q() as u16;
        let total = (self.spec.q() as u128).pow(k as u32) as usize;
        let mut out = Vec::with_capacity(total);
        let mut v = vec![0u16; k];
        loop {
            out.push(self.codeword_from_coords(&v));
            let mut i = 0;
            while i < k {
                v[i] += 1;
                if v[i] < q {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    }

    /// All codewords of the cyclic code cut out by the parity-check
    /// polynomial: multiples of the generator polynomial.
    pub fn all_polynomial_codewords(&self) -> Vec<Vec<u16>> {
        let sub = self.spec.subfield();
        let g = self.generator_poly();
        let k = self.dimension();
        let n = self.length();
        let q = self.spec.q() as u16;
        let mut out = Vec::new();
        let mut msg = vec![0u16; k];
        loop {
            let prod = poly::mul(sub, &msg, &g);
            let mut w = prod;
            w.resize(n, 0);
            out.push(w);
            let mut i = 0;
            while i < k {
                msg[i] += 1;
                if msg[i] < q {
                    break;
                }
                msg[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out
    }
}

fn codeword_raw(spec: &FieldSpec, derived: &DerivedParams, xbar: &[Fe]) -> Vec<u16> {
    let n = derived.length;
    (1..=n)
        .map(|i| {
            let mut acc = Fe::ZERO;
            for (x, &aj) in xbar.iter().zip(&derived.exponents) {
                if x.is_zero() {
                    continue;
                }
                let term = spec.mul(*x, spec.gamma_pow(aj % (spec.order() - 1) * (i % (spec.order() - 1)) % (spec.order() - 1)));
                acc = spec.add(acc, term);
            }
            spec.trace_to_mid(acc)
        })
        .collect()
}

/// The q-cyclotomic coset structure behind one exponent (exposed for
/// inspection and tests).
pub fn exponent_coset(spec: &FieldSpec, a: u64) -> Vec<u64> {
    let n = spec.order() - 1;
    cyclotomic_coset(n, spec.q(), (n - a % n) % n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use std::collections::HashSet;

    fn simplex() -> CyclicCode {
        let spec = Arc::new(build_field(2, 1, 3).unwrap());
        CyclicCode::build(
            spec,
            CodeParams {
                e: 1,
                t: 1,
                a: 1,
                delta: vec![0],
            },
        )
        .unwrap()
    }

    #[test]
    fn simplex_instance_is_valid() {
        let c = simplex();
        assert_eq!(c.length(), 7);
        assert_eq!(c.dimension(), 3);
        assert_eq!(c.derived().delta_gcd, 1);
        assert_eq!(c.derived().class_count, 1);
    }

    #[test]
    fn simplex_nonzero_words_have_weight_4() {
        let c = simplex();
        for w in c.all_trace_codewords() {
            let wt = w.iter().filter(|&&x| x != 0).count();
            if w.iter().any(|&x| x != 0) {
                assert_eq!(wt, 4);
            }
        }
    }

    #[test]
    fn rejects_residue_collision() {
        let spec = Arc::new(build_field(3, 1, 2).unwrap());
        let err = validate(
            &spec,
            &CodeParams {
                e: 4,
                t: 2,
                a: 1,
                delta: vec![0, 4],
            },
        )
        .unwrap_err();
        assert!(matches!(err, Rejection::ResidueCollision { .. }));
        assert_eq!(err.assumption(), 2);
    }

    #[test]
    fn rejects_residue_gcd() {
        let spec = Arc::new(build_field(3, 1, 4).unwrap());
        // differences all even, gcd(2, 4) = 2
        let err = validate(
            &spec,
            &CodeParams {
                e: 4,
                t: 2,
                a: 1,
                delta: vec![0, 2],
            },
        )
        .unwrap_err();
        assert!(matches!(err, Rejection::ResidueGcd { value: 2 }));
    }

    #[test]
    fn rejects_zero_exponent_and_bad_split() {
        let spec = Arc::new(build_field(2, 1, 3).unwrap());
        assert!(matches!(
            validate(&spec, &CodeParams { e: 1, t: 1, a: 7, delta: vec![0] }),
            Err(Rejection::ZeroExponent { .. })
        ));
        assert!(matches!(
            validate(&spec, &CodeParams { e: 3, t: 1, a: 1, delta: vec![0] }),
            Err(Rejection::SplitNotDividing { .. })
        ));
    }

    #[test]
    fn derived_examples() {
        let spec = build_field(3, 1, 2).unwrap();
        let p = CodeParams {
            e: 2,
            t: 2,
            a: 1,
            delta: vec![0, 1],
        };
        validate(&spec, &p).unwrap();
        let d = derive(&spec, &p);
        assert_eq!(d.exponents, vec![1, 5]);
        assert_eq!(d.delta_gcd, 1);
        assert_eq!(d.length, 8);
        assert_eq!(d.class_count, 2);

        let spec = build_field(2, 1, 3).unwrap();
        let p = CodeParams {
            e: 1,
            t: 1,
            a: 1,
            delta: vec![0],
        };
        let d = derive(&spec, &p);
        assert_eq!((d.delta_gcd, d.length, d.class_count), (1, 7, 1));

        let spec = build_field(7, 1, 2).unwrap();
        let p = CodeParams {
            e: 3,
            t: 2,
            a: 1,
            delta: vec![0, 1],
        };
        validate(&spec, &p).unwrap();
        let d = derive(&spec, &p);
        assert_eq!(d.exponents, vec![1, 17]);
        assert_eq!((d.delta_gcd, d.length, d.class_count), (1, 48, 1));
    }

    #[test]
    fn codeword_is_linear() {
        let spec = Arc::new(build_field(3, 1, 2).unwrap());
        let c = CyclicCode::build(
            spec.clone(),
            CodeParams {
                e: 2,
                t: 2,
                a: 1,
                delta: vec![0, 1],
            },
        )
        .unwrap();
        let sub = spec.subfield();
        assert!(c.codeword(&[Fe::ZERO, Fe::ZERO]).iter().all(|&x| x == 0));
        for xa in 0..9u32 {
            for xb in 0..9u32 {
                let x = [Fe(xa % 9), Fe(xb)];
                let y = [Fe((xa + 1) % 9), Fe(xb / 2)];
                // packed adds must go through the field
                let sum = [spec.add(x[0], y[0]), spec.add(x[1], y[1])];
                let cw_sum = c.codeword(&sum);
                let (cx, cy) = (c.codeword(&x), c.codeword(&y));
                let manual: Vec<u16> = cx.iter().zip(&cy).map(|(&a, &b)| sub.add(a, b)).collect();
                assert_eq!(cw_sum, manual);
            }
        }
    }

    #[test]
    fn parity_check_poly_shape() {
        let c = simplex();
        assert_eq!(c.parity_check_poly().len() - 1, 3);
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
        assert_eq!(c.parity_check_poly().len() - 1, 4);
    }

    #[test]
    fn trace_code_equals_polynomial_code_small() {
        for (p, s, m, e, t, a, delta) in [
            (2u64, 1u32, 3u32, 1u64, 1usize, 1u64, vec![0u64]),
            (3, 1, 2, 2, 2, 1, vec![0, 1]),
            (3, 1, 2, 1, 1, 1, vec![0]),
            (7, 1, 2, 3, 2, 1, vec![0, 1]),
        ] {
            let spec = Arc::new(build_field(p, s, m).unwrap());
            let c = CyclicCode::build(spec, CodeParams { e, t, a, delta }).unwrap();
            let trace: HashSet<Vec<u16>> = c.all_trace_codewords().into_iter().collect();
            let polyc: HashSet<Vec<u16>> = c.all_polynomial_codewords().into_iter().collect();
            assert_eq!(trace.len(), (c.spec().q() as usize).pow(c.dimension() as u32));
            assert_eq!(trace, polyc, "p={p} m={m} e={e} t={t}");
        }
    }

    #[test]
    fn trace_code_closed_under_cyclic_shift() {
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
        let words: HashSet<Vec<u16>> = c.all_trace_codewords().into_iter().collect();
        for w in &words {
            let mut shifted = vec![w[w.len() - 1]];
            shifted.extend_from_slice(&w[..w.len() - 1]);
            assert!(words.contains(&shifted));
        }
    }
}
