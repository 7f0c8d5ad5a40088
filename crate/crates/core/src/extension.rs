//! Extended GB families: member `m` lives in the ring of dimension
//! `kappa_m * l` and has generators `p_m * a`, `p_m * b`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::code::{build_gb, weight_profile, CssCode};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::par::{map_indexed, Execution};
use crate::poly::{Poly, RingPoly};

/// Inputs of a family extension. Member indices are 1-based in the public API.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionPlan {
    a: RingPoly,
    b: RingPoly,
    kappa: Vec<usize>,
    p_seq: Vec<Poly>,
}

impl ExtensionPlan {
    /// Validates the plan eagerly: `kappa` strictly increasing from 1, `p_1 = 1`,
    /// every `p_m` nonzero with `deg p_m <= (kappa_m - 1) l`.
    pub fn new(a: RingPoly, b: RingPoly, kappa: Vec<usize>, p_seq: Vec<Poly>) -> Result<Self> {
        if a.ring_dim() != b.ring_dim() {
            return Err(Error::DimensionMismatch {
                expected: a.ring_dim(),
                found: b.ring_dim(),
            });
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroGenerators);
        }
        if kappa.is_empty() {
            return Err(Error::InvalidPlan("a plan needs at least one member".into()));
        }
        if kappa.len() != p_seq.len() {
            return Err(Error::InvalidPlan(format!(
                "{} multipliers but {} polynomials",
                kappa.len(),
                p_seq.len()
            )));
        }
        if kappa[0] != 1 {
            return Err(Error::InvalidPlan(format!("first multiplier is {}, not 1", kappa[0])));
        }
        if !p_seq[0].is_one() {
            return Err(Error::InvalidPlan(format!("first polynomial is {}, not 1", p_seq[0])));
        }
        for w in kappa.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidPlan(format!(
                    "multipliers must strictly increase, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let ell = a.ring_dim();
        for (m, (p, &k)) in p_seq.iter().zip(&kappa).enumerate() {
            match p.degree() {
                None => {
                    return Err(Error::InvalidPlan(format!("polynomial of member {} is zero", m + 1)))
                }
                Some(deg) if deg > (k - 1) * ell => {
                    return Err(Error::InvalidPlan(format!(
                        "member {}: deg {} exceeds ({}-1)*{}",
                        m + 1,
                        deg,
                        k,
                        ell
                    )))
                }
                _ => {}
            }
        }
        Ok(ExtensionPlan { a, b, kappa, p_seq })
    }

    pub fn from_code(base: &CssCode, kappa: Vec<usize>, p_seq: Vec<Poly>) -> Result<Self> {
        Self::new(base.a().clone(), base.b().clone(), kappa, p_seq)
    }

    /// `kappa_m = m`, `p_m = 1`.
    pub fn identity(base: &CssCode, members: usize) -> Result<Self> {
        Self::from_code(base, (1..=members).collect(), vec![Poly::one(); members])
    }

    /// Plain lifts of the base generators to the given ring sizes, which must
    /// all be multiples of the base size.
    pub fn identity_with_lengths(base: &CssCode, ells: &[usize]) -> Result<Self> {
        let ell = base.ell();
        let mut kappa = Vec::with_capacity(ells.len());
        for &l in ells {
            if l == 0 || l % ell != 0 {
                return Err(Error::InvalidPlan(format!(
                    "ring size {l} is not a multiple of the base size {ell}"
                )));
            }
            kappa.push(l / ell);
        }
        Self::from_code(base, kappa, vec![Poly::one(); ells.len()])
    }

    /// Tripling plan: `kappa_m = 3^(m-1)`, `p_m = prod_{k<m} (1 + x^(l_k))`.
    pub fn tripling(base: &CssCode, members: usize) -> Result<Self> {
        let ell = base.ell();
        let mut kappa = Vec::with_capacity(members);
        let mut p_seq = Vec::with_capacity(members);
        let mut p = Poly::one();
        let mut k = 1usize;
        for _ in 0..members {
            kappa.push(k);
            p_seq.push(p.clone());
            p = p.mul(&Poly::x_pow_plus_one(k * ell));
            k *= 3;
        }
        Self::from_code(base, kappa, p_seq)
    }

    pub fn ell(&self) -> usize {
        self.a.ring_dim()
    }

    pub fn members(&self) -> usize {
        self.kappa.len()
    }

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    pub fn p_seq(&self) -> &[Poly] {
        &self.p_seq
    }

    pub fn base_a(&self) -> &RingPoly {
        &self.a
    }

    pub fn base_b(&self) -> &RingPoly {
        &self.b
    }

    /// Generators of member `m` (1-based).
    pub fn member_generators(&self, m: usize) -> Result<(RingPoly, RingPoly)> {
        let idx = self.index(m)?;
        let l = self.kappa[idx] * self.ell();
        let p = &self.p_seq[idx];
        Ok((
            RingPoly::reduced(&p.mul(self.a.poly()), l),
            RingPoly::reduced(&p.mul(self.b.poly()), l),
        ))
    }

    /// Builds member `m` (1-based).
    pub fn member(&self, m: usize) -> Result<CssCode> {
        let (a, b) = self.member_generators(m)?;
        build_gb(&a, &b)
    }

    fn index(&self, m: usize) -> Result<usize> {
        if m == 0 || m > self.members() {
            return Err(Error::InvalidPlan(format!(
                "member {m} out of range 1..={}",
                self.members()
            )));
        }
        Ok(m - 1)
    }

    pub fn to_doc(&self) -> PlanDoc {
        PlanDoc {
            base: BaseDoc {
                a: self.a.poly().clone(),
                b: self.b.poly().clone(),
                ell: self.ell(),
            },
            members: self.members(),
            kappa: self.kappa.clone(),
            p_seq: self.p_seq.clone(),
        }
    }
}

/// Plan file: `{base: {a, b, ell}, M, kappa, p_seq}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub base: BaseDoc,
    #[serde(rename = "M")]
    pub members: usize,
    pub kappa: Vec<usize>,
    pub p_seq: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseDoc {
    pub a: Poly,
    pub b: Poly,
    pub ell: usize,
}

impl BaseDoc {
    pub fn to_code(&self) -> Result<CssCode> {
        build_gb(
            &RingPoly::new(self.a.clone(), self.ell)?,
            &RingPoly::new(self.b.clone(), self.ell)?,
        )
    }
}

impl PlanDoc {
    pub fn to_plan(&self) -> Result<ExtensionPlan> {
        if self.members != self.kappa.len() {
            return Err(Error::InvalidPlan(format!(
                "M = {} but {} multipliers given",
                self.members,
                self.kappa.len()
            )));
        }
        ExtensionPlan::new(
            RingPoly::new(self.base.a.clone(), self.base.ell)?,
            RingPoly::new(self.base.b.clone(), self.base.ell)?,
            self.kappa.clone(),
            self.p_seq.clone(),
        )
    }
}

/// Builds every member of the plan.
pub fn extend_family(plan: &ExtensionPlan) -> Result<Vec<CssCode>> {
    extend_family_with(plan, Execution::default())
}

pub fn extend_family_with(plan: &ExtensionPlan, exec: Execution) -> Result<Vec<CssCode>> {
    map_indexed(exec, plan.members(), |i| plan.member(i + 1))
        .into_iter()
        .collect()
}

/// Outcome of the `k_m >= k_1` check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundCheck {
    pub holds: bool,
    pub dims: Vec<usize>,
    /// First member (1-based) with `k_m < k_1`.
    pub violation: Option<usize>,
}

pub fn check_dim_lower_bound(family: &[CssCode]) -> LowerBoundCheck {
    let dims: Vec<usize> = family.iter().map(CssCode::k).collect();
    let violation = dims
        .first()
        .and_then(|&k1| dims.iter().position(|&k| k < k1))
        .map(|i| i + 1);
    LowerBoundCheck {
        holds: violation.is_none(),
        dims,
        violation,
    }
}

/// The individual gcd-degree terms of the closed-form dimension of member `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoprimeFormula {
    pub k1: usize,
    /// `deg gcd(p_m, x^l + 1)`
    pub p_base_modulus: usize,
    /// `deg gcd(p_m, S)` with `S = sum_{i<kappa_m} x^(i l)`
    pub p_cofactor: usize,
    /// `deg gcd(a, b, S)`
    pub generators_cofactor: usize,
}

impl CoprimeFormula {
    pub fn total(&self) -> usize {
        self.k1 + 2 * (self.p_base_modulus + self.p_cofactor + self.generators_cofactor)
    }
}

/// Evaluates the closed-form terms without checking any precondition.
pub fn coprime_formula_terms(plan: &ExtensionPlan, m: usize) -> Result<CoprimeFormula> {
    let idx = plan.index(m)?;
    let ell = plan.ell();
    let p = &plan.p_seq[idx];
    let modulus = Poly::x_pow_plus_one(ell);
    let cofactor = Poly::geometric_sum(ell, plan.kappa[idx]);
    let (a, b) = (plan.a.poly(), plan.b.poly());
    let deg = |g: Poly| g.degree_or_zero();
    Ok(CoprimeFormula {
        k1: 2 * deg(Poly::gcd_all(&[a, b, &modulus])?),
        p_base_modulus: deg(p.gcd(&modulus)?),
        p_cofactor: deg(p.gcd(&cofactor)?),
        generators_cofactor: deg(Poly::gcd_all(&[a, b, &cofactor])?),
    })
}

/// Closed-form dimension of member `m` when `p_m` is coprime to `gcd(a, b)`.
///
/// The derivation also splits `x^(kappa l) + 1 = (x^l + 1) S` into coprime
/// factors, which over GF(2) fails whenever `kappa` is even; such members are
/// refused. The result is cross-checked against the rank of the built member.
pub fn dim_exact_coprime(plan: &ExtensionPlan, m: usize) -> Result<usize> {
    let idx = plan.index(m)?;
    let ell = plan.ell();
    let p = &plan.p_seq[idx];
    let phi = Poly::gcd_all(&[plan.a.poly(), plan.b.poly()])?;
    let common = p.gcd(&phi)?;
    if !common.is_one() {
        return Err(Error::NotCoprime {
            member: m,
            common: common.to_string(),
        });
    }
    let kappa = plan.kappa[idx];
    let cofactor = Poly::geometric_sum(ell, kappa);
    if !Poly::x_pow_plus_one(ell).gcd(&cofactor)?.is_one() {
        return Err(Error::CofactorNotCoprime { member: m, kappa });
    }
    let formula = coprime_formula_terms(plan, m)?.total();
    let rank = plan.member(m)?.k();
    if formula != rank {
        return Err(Error::FormulaMismatch {
            member: m,
            formula,
            rank,
        });
    }
    Ok(formula)
}

/// Weight and density data of one family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberDensity {
    pub n: usize,
    pub ell: usize,
    pub w_r: usize,
    pub w_c: usize,
    /// `w_r / n`
    pub q_r: Ratio<u64>,
    /// `w_c / l`
    pub q_c: Ratio<u64>,
}

impl MemberDensity {
    pub fn q(&self) -> Ratio<u64> {
        self.q_r.max(self.q_c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SparsityClass {
    /// Constant row and column weights; `t` is the largest of them.
    QLdpc { t: usize },
    /// `q(m+1)/q(m)` is the same rational in `(0, 1)` for every pair;
    /// `alpha_fit` is the least-squares slope of `ln q(m)` exponentiated.
    ExponentialDecay { ratio: Ratio<u64>, alpha_fit: f64 },
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparsityProfile {
    pub members: Vec<MemberDensity>,
    pub class: SparsityClass,
}

pub fn sparsity_profile(family: &[CssCode]) -> Result<SparsityProfile> {
    if family.is_empty() {
        return Err(Error::InvalidPlan("empty family".into()));
    }
    let mut members = Vec::with_capacity(family.len());
    for (i, code) in family.iter().enumerate() {
        let w = weight_profile(code);
        let member = i + 1;
        if let Some(index) = w.per_row.iter().position(|&x| x == 0) {
            return Err(Error::ZeroLine { member, what: "row", index });
        }
        if let Some(index) = w.per_column.iter().position(|&x| x == 0) {
            return Err(Error::ZeroLine { member, what: "column", index });
        }
        members.push(density(code.n(), code.ell(), w.w_r, w.w_c));
    }
    let class = classify(&members);
    Ok(SparsityProfile { members, class })
}

fn density(n: usize, ell: usize, w_r: usize, w_c: usize) -> MemberDensity {
    MemberDensity {
        n,
        ell,
        w_r,
        w_c,
        q_r: Ratio::new(w_r as u64, n as u64),
        q_c: Ratio::new(w_c as u64, ell as u64),
    }
}

fn classify(members: &[MemberDensity]) -> SparsityClass {
    let first = &members[0];
    if members.iter().all(|m| m.w_r == first.w_r && m.w_c == first.w_c) {
        let t = members.iter().map(|m| m.w_r.max(m.w_c)).max().unwrap_or(0);
        return SparsityClass::QLdpc { t };
    }
    if members.len() < 2 {
        return SparsityClass::Other;
    }
    let ratios: Vec<Ratio<u64>> = members.windows(2).map(|w| w[1].q() / w[0].q()).collect();
    let r = ratios[0];
    if ratios.iter().all(|&x| x == r) && r < Ratio::from_integer(1) && r > Ratio::from_integer(0) {
        return SparsityClass::ExponentialDecay {
            ratio: r,
            alpha_fit: fit_alpha(members),
        };
    }
    SparsityClass::Other
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `exp` of the least-squares slope of `ln q(m)` against `m`.
fn fit_alpha(members: &[MemberDensity]) -> f64 {
    let pts: Vec<(f64, f64)> = members
        .iter()
        .enumerate()
        .map(|(i, m)| ((i + 1) as f64, ratio_f64(m.q()).ln()))
        .collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx).exp()
}

fn check_shor_distance(d: usize) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidShorDistance(d));
    }
    Ok(())
}

/// `(w_r / n, w_c / n) = (2/d, 4/d^2)` for the `[[d^2, 1, d]]` Shor code.
pub fn shor_sparsity(d: usize) -> Result<(Ratio<u64>, Ratio<u64>)> {
    check_shor_distance(d)?;
    let d = d as u64;
    Ok((Ratio::new(2 * d, d * d), Ratio::new(4, d * d)))
}

/// Check matrices of the `[[d^2, 1, d]]` Shor code: Z-pairs inside each block
/// of `d` qubits and X-checks across two consecutive blocks.
pub fn shor_check_matrices(d: usize) -> Result<(BitMatrix, BitMatrix)> {
    check_shor_distance(d)?;
    let n = d * d;
    let mut hz = BitMatrix::zeros(d * (d - 1), n);
    for i in 0..d {
        for k in 0..d - 1 {
            let row = i * (d - 1) + k;
            hz.set(row, d * i + k, true);
            hz.set(row, d * i + k + 1, true);
        }
    }
    let mut hx = BitMatrix::zeros(d - 1, n);
    for j in 0..d - 1 {
        for q in d * j..d * j + 2 * d {
            hx.set(j, q, true);
        }
    }
    Ok((hx, hz))
}

/// Measured `(w_r, w_c)` of the explicit Shor matrices, where `w_c` counts the
/// checks of both types touching a qubit.
pub fn shor_measured_weights(d: usize) -> Result<(usize, usize)> {
    let (hx, hz) = shor_check_matrices(d)?;
    let w_r = hx
        .row_weights()
        .into_iter()
        .chain(hz.row_weights())
        .max()
        .unwrap_or(0);
    let w_c = hx
        .col_weights()
        .iter()
        .zip(hz.col_weights())
        .map(|(x, z)| x + z)
        .max()
        .unwrap_or(0);
    Ok((w_r, w_c))
}
