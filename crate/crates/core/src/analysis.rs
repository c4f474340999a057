//! Certification of quantum codes.
//!
//! The certifiers evaluate the Knill–Laflamme conditions. For a code with
//! codewords |c_k⟩ and an error-operator family {A_i} they require
//!
//!   ⟨c_k| A_i†A_j |c_k⟩ = ⟨c_l| A_i†A_j |c_l⟩   and
//!   ⟨c_k| A_i†A_j |c_l⟩ = 0 for k ≠ l.
//!
//! When error positions are announced (erasures), only operators supported on
//! one common position set matter, and the products A_i†A_j collapse back
//! into the same operator basis, so the conditions reduce to single-operator
//! form. A code correcting t arbitrary errors is exactly a code correcting 2t
//! erasures; [`check_general_kl`] exploits that equivalence, while
//! [`check_general_kl_direct`] evaluates the literal operator pairs for
//! cross-validation.

use std::fmt::Write as _;

use itertools::Itertools;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{inner, LocalOperator, StateVector};

/// Condition-level tolerance: double precision leaves the accumulated error
/// of these sums far below 1e-12, so 1e-9 has ample margin.
pub const CONDITION_TOL: f64 = 1e-9;

/// An orthonormal list of codewords spanning a codespace.
#[derive(Clone, Debug)]
pub struct QuantumCode {
    num_qubits: usize,
    logical_qubits: usize,
    basis: Vec<StateVector>,
}

impl QuantumCode {
    /// Validate and wrap a codeword list. The list length must be a power of
    /// two and the codewords pairwise orthonormal within 1e-10.
    pub fn new(basis: Vec<StateVector>) -> Result<QuantumCode> {
        if basis.is_empty() {
            return Err(Error::InvalidArgument("empty codeword list".into()));
        }
        let num_qubits = basis[0].num_qubits();
        if !basis.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "{} codewords is not a power of two",
                basis.len()
            )));
        }
        let logical_qubits = basis.len().trailing_zeros() as usize;
        let mut worst: f64 = 0.0;
        for (i, a) in basis.iter().enumerate() {
            if a.num_qubits() != num_qubits {
                return Err(Error::DimensionMismatch(
                    "codewords on differing qubit counts".into(),
                ));
            }
            for (j, b) in basis.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b).norm() - expected).abs());
            }
        }
        if worst > 1e-10 {
            return Err(Error::NotOrthonormal { worst });
        }
        Ok(QuantumCode {
            num_qubits,
            logical_qubits,
            basis,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn logical_qubits(&self) -> usize {
        self.logical_qubits
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn codeword(&self, index: usize) -> &StateVector {
        &self.basis[index]
    }
}

/// A tensor product of |i⟩⟨j| factors at distinct positions, identity
/// elsewhere.
#[derive(Clone, Debug)]
pub struct ErrorOperator {
    factors: Vec<LocalOperator>,
}

impl ErrorOperator {
    pub fn new(factors: Vec<LocalOperator>) -> ErrorOperator {
        ErrorOperator { factors }
    }

    pub fn factors(&self) -> &[LocalOperator] {
        &self.factors
    }

    pub fn positions(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.position()).collect()
    }

    /// Raw (unnormalized) action on a state.
    pub fn apply_to(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        let mut amps = state.amplitudes().to_vec();
        for f in &self.factors {
            if f.position() == 0 || f.position() > state.num_qubits() {
                return Err(Error::PositionOutOfRange {
                    position: f.position(),
                    num_qubits: state.num_qubits(),
                });
            }
            f.apply_in_place(&mut amps, state.num_qubits());
        }
        Ok(amps)
    }
}

/// The 4^t operator basis {⊗_{k∈positions} |i_k⟩⟨j_k|} on a position set.
///
/// Factors are emitted per position in the order P_00, P_01, P_10, P_11, so
/// the first operator of the list is the projector product and the basis for
/// a single position matches |0⟩⟨0|, |0⟩⟨1|, |1⟩⟨0|, |1⟩⟨1|.
pub fn one_error_operator_basis(
    num_qubits: usize,
    positions: &[usize],
) -> Result<Vec<ErrorOperator>> {
    if positions.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut sorted: Vec<usize> = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &p in &sorted {
        if p == 0 || p > num_qubits {
            return Err(Error::PositionOutOfRange {
                position: p,
                num_qubits,
            });
        }
    }
    let t = sorted.len();
    let mut out = Vec::with_capacity(1 << (2 * t));
    for pattern in 0..1usize << (2 * t) {
        let factors = sorted
            .iter()
            .enumerate()
            .map(|(slot, &pos)| {
                let pair = pattern >> (2 * (t - 1 - slot)) & 0b11;
                LocalOperator::ket_bra(pos, (pair >> 1) as u8, (pair & 1) as u8)
            })
            .collect();
        out.push(ErrorOperator::new(factors));
    }
    Ok(out)
}

fn ket_bra_label(op: &LocalOperator) -> String {
    // Identify which |i⟩⟨j| this factor is by its single nonzero entry.
    let m = op.matrix();
    for i in 0..2 {
        for j in 0..2 {
            if m[i][j].norm() > 0.5 {
                return format!("P_{i}{j}");
            }
        }
    }
    "P_??".into()
}

fn operator_label(op: &ErrorOperator) -> String {
    let mut s = String::new();
    for (idx, f) in op.factors().iter().enumerate() {
        if idx > 0 {
            s.push(',');
        }
        let _ = write!(s, "{}", ket_bra_label(f));
    }
    s
}

/// Where the worst condition violation occurred.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub positions: Vec<usize>,
    pub operator: String,
    pub pair: (usize, usize),
}

/// Outcome of a Knill–Laflamme evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub passed: bool,
    /// max over operators A of max_{k,l} |⟨c_k|A|c_k⟩ − ⟨c_l|A|c_l⟩|
    pub worst_expectation_gap: f64,
    /// max over operators A and k ≠ l of |⟨c_k|A|c_l⟩|
    pub worst_off_diagonal: f64,
    pub witness: Option<Witness>,
    pub tolerance: f64,
}

impl ConditionReport {
    fn trivial_pass(tolerance: f64) -> ConditionReport {
        ConditionReport {
            passed: true,
            worst_expectation_gap: 0.0,
            worst_off_diagonal: 0.0,
            witness: None,
            tolerance,
        }
    }
}

/// Running worst-violation tracker shared by the checkers.
struct ViolationTracker {
    worst_expectation_gap: f64,
    worst_off_diagonal: f64,
    witness: Option<Witness>,
    witness_value: f64,
}

impl ViolationTracker {
    fn new() -> ViolationTracker {
        ViolationTracker {
            worst_expectation_gap: 0.0,
            worst_off_diagonal: 0.0,
            witness: None,
            witness_value: 0.0,
        }
    }

    fn record(&mut self, value: f64, is_gap: bool, positions: &[usize], label: &str, pair: (usize, usize)) {
        if is_gap {
            self.worst_expectation_gap = self.worst_expectation_gap.max(value);
        } else {
            self.worst_off_diagonal = self.worst_off_diagonal.max(value);
        }
        if value > self.witness_value {
            self.witness_value = value;
            self.witness = Some(Witness {
                positions: positions.to_vec(),
                operator: label.to_string(),
                pair,
            });
        }
    }

    fn into_report(self, tolerance: f64) -> ConditionReport {
        let passed =
            self.worst_expectation_gap < tolerance && self.worst_off_diagonal < tolerance;
        ConditionReport {
            passed,
            worst_expectation_gap: self.worst_expectation_gap,
            worst_off_diagonal: self.worst_off_diagonal,
            witness: if passed { None } else { self.witness },
            tolerance,
        }
    }
}

fn scan_subset(code: &QuantumCode, positions: &[usize], tracker: &mut ViolationTracker) -> Result<()> {
    let dim = code.dimension();
    for op in one_error_operator_basis(code.num_qubits(), positions)? {
        let applied: Vec<Vec<Complex64>> = code
            .basis()
            .iter()
            .map(|c| op.apply_to(c))
            .collect::<Result<_>>()?;
        let label = operator_label(&op);
        let expectations: Vec<Complex64> = (0..dim)
            .map(|k| inner(code.codeword(k).amplitudes(), &applied[k]))
            .collect();
        for k in 0..dim {
            for l in 0..dim {
                if k == l {
                    continue;
                }
                if k < l {
                    let gap = (expectations[k] - expectations[l]).norm();
                    tracker.record(gap, true, positions, &label, (k, l));
                }
                let off = inner(code.codeword(k).amplitudes(), &applied[l]).norm();
                tracker.record(off, false, positions, &label, (k, l));
            }
        }
    }
    Ok(())
}

/// Evaluate the erasure-specialized conditions for every position subset of
/// size `t`. Passing means the code corrects `t` erasures.
pub fn check_erasure_kl(code: &QuantumCode, t: usize) -> Result<ConditionReport> {
    check_erasure_kl_with_tol(code, t, CONDITION_TOL)
}

pub fn check_erasure_kl_with_tol(
    code: &QuantumCode,
    t: usize,
    tolerance: f64,
) -> Result<ConditionReport> {
    if t > code.num_qubits() {
        return Err(Error::InvalidArgument(format!(
            "t = {t} exceeds the {} physical qubits",
            code.num_qubits()
        )));
    }
    if t == 0 {
        return Ok(ConditionReport::trivial_pass(tolerance));
    }
    let mut tracker = ViolationTracker::new();
    for subset in (1..=code.num_qubits()).combinations(t) {
        scan_subset(code, &subset, &mut tracker)?;
    }
    Ok(tracker.into_report(tolerance))
}

/// Evaluate the general (unknown-position) conditions for `t` errors via the
/// proven-equivalent erasure form at 2t positions. Passing means the code
/// corrects `t` arbitrary errors.
pub fn check_general_kl(code: &QuantumCode, t: usize) -> Result<ConditionReport> {
    check_general_kl_with_tol(code, t, CONDITION_TOL)
}

pub fn check_general_kl_with_tol(
    code: &QuantumCode,
    t: usize,
    tolerance: f64,
) -> Result<ConditionReport> {
    if t > code.num_qubits() {
        return Err(Error::InvalidArgument(format!(
            "t = {t} exceeds the {} physical qubits",
            code.num_qubits()
        )));
    }
    // Products A_i†A_j of t-error operators span the operators on at most 2t
    // positions (capped by the register size).
    let span = (2 * t).min(code.num_qubits());
    check_erasure_kl_with_tol(code, span, tolerance)
}

/// Literal evaluation of the general conditions over operator pairs
/// A_i†A_j. Exponentially more work than [`check_general_kl`]; kept as a
/// cross-validation path.
pub fn check_general_kl_direct(code: &QuantumCode, t: usize) -> Result<ConditionReport> {
    if t > code.num_qubits() {
        return Err(Error::InvalidArgument(format!(
            "t = {t} exceeds the {} physical qubits",
            code.num_qubits()
        )));
    }
    let tolerance = CONDITION_TOL;
    if t == 0 {
        return Ok(ConditionReport::trivial_pass(tolerance));
    }
    let dim = code.dimension();
    // Precompute every basis operator's action on every codeword.
    let mut applied: Vec<(Vec<usize>, String, Vec<Vec<Complex64>>)> = Vec::new();
    for subset in (1..=code.num_qubits()).combinations(t) {
        for op in one_error_operator_basis(code.num_qubits(), &subset)? {
            let acted: Vec<Vec<Complex64>> = code
                .basis()
                .iter()
                .map(|c| op.apply_to(c))
                .collect::<Result<_>>()?;
            applied.push((subset.clone(), operator_label(&op), acted));
        }
    }
    let mut tracker = ViolationTracker::new();
    for (pos_a, label_a, acted_a) in &applied {
        for (pos_b, label_b, acted_b) in &applied {
            // ⟨c_k| A†B |c_l⟩ = ⟨A c_k | B c_l⟩
            let positions: Vec<usize> = pos_a
                .iter()
                .chain(pos_b)
                .copied()
                .sorted()
                .dedup()
                .collect();
            let label = format!("({label_a})†({label_b})");
            let expectations: Vec<Complex64> =
                (0..dim).map(|k| inner(&acted_a[k], &acted_b[k])).collect();
            for k in 0..dim {
                for l in 0..dim {
                    if k == l {
                        continue;
                    }
                    if k < l {
                        let gap = (expectations[k] - expectations[l]).norm();
                        tracker.record(gap, true, &positions, &label, (k, l));
                    }
                    let off = inner(&acted_a[k], &acted_b[l]).norm();
                    tracker.record(off, false, &positions, &label, (k, l));
                }
            }
        }
    }
    Ok(tracker.into_report(tolerance))
}

/// Consistency check for the claim that a t-error-correcting code corrects
/// 2t erasures: returns the truth of the implication
/// general(t) passed ⇒ erasure(2t) passed.
pub fn erasure_implies_general(code: &QuantumCode, t: usize) -> Result<bool> {
    if 2 * t > code.num_qubits() {
        return Err(Error::InvalidArgument(format!(
            "2t = {} exceeds the {} physical qubits",
            2 * t,
            code.num_qubits()
        )));
    }
    let general = check_general_kl(code, t)?;
    if !general.passed {
        return Ok(true);
    }
    Ok(check_erasure_kl(code, 2 * t)?.passed)
}

/// Result of extracting a product state from a two-qubit subspace.
#[derive(Clone, Debug)]
pub struct ProductStateResult {
    pub found: bool,
    pub eta: (Complex64, Complex64),
    pub state: StateVector,
    /// The quadratic's coefficients (c₁, c₁₂, c₂) on the orthonormalized basis.
    pub coefficients: (Complex64, Complex64, Complex64),
}

impl ProductStateResult {
    /// |⟨00|π⟩⟨11|π⟩ − ⟨01|π⟩⟨10|π⟩|: zero exactly on product states.
    pub fn residual(&self) -> f64 {
        product_residual(&self.state)
    }
}

/// Determinant-form product criterion for any two-qubit state.
pub fn product_residual(state: &StateVector) -> f64 {
    let a = state.amplitudes();
    (a[0b00] * a[0b11] - a[0b01] * a[0b10]).norm()
}

fn det_coefficient(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u[0b00] * v[0b11] + v[0b00] * u[0b11] - u[0b01] * v[0b10] - v[0b01] * u[0b10]
}

/// Find a product state in the span of two two-qubit states.
///
/// The span always contains one: inserting η₁|b₁⟩ + η₂|b₂⟩ into the product
/// criterion gives the quadratic c₁η₁² + c₁₂η₁η₂ + c₂η₂² = 0, which has a
/// nontrivial root whenever c₁ and c₂ are not both blocking (and when one of
/// them vanishes the corresponding basis state is itself a product state).
pub fn find_product_state(b1: &StateVector, b2: &StateVector) -> Result<ProductStateResult> {
    if b1.num_qubits() != 2 || b2.num_qubits() != 2 {
        return Err(Error::DimensionMismatch(
            "product-state extraction expects two-qubit states".into(),
        ));
    }
    // The lemma concerns the subspace, not the basis: orthonormalize first.
    let u1 = b1.amplitudes().to_vec();
    let overlap = inner(&u1, b2.amplitudes());
    let mut u2: Vec<Complex64> = b2
        .amplitudes()
        .iter()
        .zip(&u1)
        .map(|(b, a)| b - overlap * a)
        .collect();
    let n2 = u2.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if n2 < 1e-9 {
        return Err(Error::LinearlyDependent);
    }
    for a in &mut u2 {
        *a /= n2;
    }

    // det_coefficient(u, u) double-counts the determinant terms.
    let c1 = det_coefficient(&u1, &u1) / 2.0;
    let c2 = det_coefficient(&u2, &u2) / 2.0;
    let c12 = det_coefficient(&u1, &u2);

    let eta = if c1.norm() < 1e-12 {
        (Complex64::ONE, Complex64::ZERO)
    } else if c2.norm() < 1e-12 {
        (Complex64::ZERO, Complex64::ONE)
    } else {
        // Stable quadratic root: pick the sign that avoids cancellation
        // against −c₁₂, then normalize (η₁, η₂).
        let disc = (c12 * c12 - 4.0 * c1 * c2).sqrt();
        let s = if (c12.conj() * disc).re < 0.0 { -disc } else { disc };
        let q = -(c12 + s) / 2.0;
        let eta1 = q / c1;
        let scale = (eta1.norm_sqr() + 1.0).sqrt();
        (eta1 / scale, Complex64::ONE / scale)
    };

    let amps: Vec<Complex64> = u1
        .iter()
        .zip(&u2)
        .map(|(a, b)| eta.0 * a + eta.1 * b)
        .collect();
    let state = StateVector::from_amplitudes(2, amps)?;
    Ok(ProductStateResult {
        found: true,
        eta,
        state,
        coefficients: (c1, c12, c2),
    })
}

/// Extract the pure state out of a (nearly) rank-one 2×2 density matrix.
fn pure_qubit_state(rho: &crate::quantum::DensityMatrix) -> StateVector {
    let (a, b) = if rho.entry(0, 0).re >= rho.entry(1, 1).re {
        (rho.entry(0, 0), rho.entry(1, 0))
    } else {
        (rho.entry(0, 1), rho.entry(1, 1))
    };
    StateVector::from_amplitudes(1, vec![a, b]).expect("rank-one density matrix has a nonzero column")
}

/// Look for a qubit position whose state is a common tensor factor of every
/// codeword. Detection is via purity of the single-qubit reduced density
/// matrix (within 1e-9) plus equality of the factors up to phase.
pub fn detect_factor(code: &QuantumCode) -> Option<(usize, StateVector)> {
    'positions: for position in 1..=code.num_qubits() {
        let mut common: Option<StateVector> = None;
        for codeword in code.basis() {
            let rho = codeword
                .reduced_density(&[position])
                .expect("position is in range");
            if (rho.purity() - 1.0).abs() > 1e-9 {
                continue 'positions;
            }
            let factor = pure_qubit_state(&rho);
            match &common {
                None => common = Some(factor),
                Some(reference) => {
                    if (reference.inner(&factor).norm() - 1.0).abs() > 1e-9 {
                        continue 'positions;
                    }
                }
            }
        }
        return Some((position, common.expect("code has at least one codeword")));
    }
    None
}

/// Delete a position that is a common tensor factor, yielding the shortened
/// code with identical dimension.
pub fn shorten_code(code: &QuantumCode, position: usize) -> Result<QuantumCode> {
    if position == 0 || position > code.num_qubits() {
        return Err(Error::PositionOutOfRange {
            position,
            num_qubits: code.num_qubits(),
        });
    }
    let n = code.num_qubits();
    let rho = code.codeword(0).reduced_density(&[position])?;
    if (rho.purity() - 1.0).abs() > 1e-9 {
        return Err(Error::NotAFactor { position });
    }
    let theta = pure_qubit_state(&rho);
    let bit = 1usize << (n - position);
    let low_mask = bit - 1;
    let mut shortened = Vec::with_capacity(code.dimension());
    for codeword in code.basis() {
        let mut rest = vec![Complex64::ZERO; 1 << (n - 1)];
        for (j, r) in rest.iter_mut().enumerate() {
            let scattered = (j & !low_mask) << 1 | (j & low_mask);
            *r = theta.amplitudes()[0].conj() * codeword.amplitudes()[scattered]
                + theta.amplitudes()[1].conj() * codeword.amplitudes()[scattered | bit];
        }
        // The contraction only inverts a genuine factorization; verify it.
        let mut residual = 0.0f64;
        for (j, r) in rest.iter().enumerate() {
            let scattered = (j & !low_mask) << 1 | (j & low_mask);
            residual +=
                (codeword.amplitudes()[scattered] - theta.amplitudes()[0] * r).norm_sqr();
            residual +=
                (codeword.amplitudes()[scattered | bit] - theta.amplitudes()[1] * r).norm_sqr();
        }
        if residual.sqrt() > 1e-6 {
            return Err(Error::NotAFactor { position });
        }
        shortened.push(StateVector::from_amplitudes(n - 1, rest)?);
    }
    QuantumCode::new(shortened)
}

/// A Haar-random pure state: complex Gaussian amplitudes, normalized.
pub fn haar_random_state<R: Rng>(num_qubits: usize, rng: &mut R) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..1usize << num_qubits)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(state) = StateVector::from_amplitudes(num_qubits, amps) {
            return state;
        }
    }
}

/// A Haar-random code of `dimension` codewords: Gaussian vectors,
/// Gram–Schmidt orthonormalized. Unbiased on the Grassmannian.
pub fn haar_random_code<R: Rng>(
    num_qubits: usize,
    dimension: usize,
    rng: &mut R,
) -> Result<QuantumCode> {
    'retry: loop {
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(dimension);
        for _ in 0..dimension {
            let mut v: Vec<Complex64> = (0..1usize << num_qubits)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            for prev in &basis {
                let overlap = inner(prev, &v);
                for (a, p) in v.iter_mut().zip(prev) {
                    *a -= overlap * p;
                }
            }
            let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if n < 1e-9 {
                continue 'retry;
            }
            for a in &mut v {
                *a /= n;
            }
            basis.push(v);
        }
        let states = basis
            .into_iter()
            .map(|v| StateVector::from_amplitudes(num_qubits, v))
            .collect::<Result<Vec<_>>>()?;
        return QuantumCode::new(states);
    }
}

/// Sample Haar-random two-dimensional codes of length `n` ∈ {2, 3} and count
/// how many pass the one-erasure certifier. No length-2 or length-3 code can
/// correct an erasure, so the expected count is zero.
pub fn falsify_short_codes(num_qubits: usize, trials: usize, seed: u64) -> Result<usize> {
    if num_qubits != 2 && num_qubits != 3 {
        return Err(Error::InvalidArgument(format!(
            "falsification targets lengths 2 and 3, got {num_qubits}"
        )));
    }
    let passes = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = crate::stream_rng(seed, trial);
            let code = haar_random_code(num_qubits, 2, &mut rng)
                .expect("Gram-Schmidt on Gaussian vectors succeeds");
            let report =
                check_erasure_kl(&code, 1).expect("t=1 is valid for any nonempty register");
            usize::from(report.passed)
        })
        .sum();
    Ok(passes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::DenseOperator;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn four_qubit_code() -> QuantumCode {
        let zero = StateVector::from_terms(4, &[("0000", c(1.0)), ("1111", c(1.0))]).unwrap();
        let one = StateVector::from_terms(4, &[("1001", c(1.0)), ("0110", c(1.0))]).unwrap();
        QuantumCode::new(vec![zero, one]).unwrap()
    }

    #[test]
    fn operator_basis_sizes_and_labels() {
        let ops = one_error_operator_basis(4, &[2]).unwrap();
        assert_eq!(ops.len(), 4);
        let labels: Vec<String> = ops.iter().map(operator_label).collect();
        assert_eq!(labels, ["P_00", "P_01", "P_10", "P_11"]);

        let ops = one_error_operator_basis(3, &[1, 3]).unwrap();
        assert_eq!(ops.len(), 16);

        assert!(matches!(
            one_error_operator_basis(3, &[]),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn operator_basis_spans_all_two_qubit_operators() {
        // Reconstruct a fixed dense 4×4 operator from its expansion in the
        // basis at positions {1,2}: coefficients via trace inner products.
        let mut rng = crate::stream_rng(5, 0);
        let mut target = vec![Complex64::ZERO; 16];
        for e in target.iter_mut() {
            use rand::Rng as _;
            *e = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
        let ops = one_error_operator_basis(2, &[1, 2]).unwrap();
        let mut recon = vec![Complex64::ZERO; 16];
        for op in &ops {
            // Materialize the basis element.
            let mut dense = DenseOperator::identity(4);
            for f in op.factors() {
                dense = f.embed(2).unwrap().matmul(&dense);
            }
            // coefficient = tr(E† T); the basis elements satisfy tr(E†E)=1.
            let mut coeff = Complex64::ZERO;
            for r in 0..4 {
                for s in 0..4 {
                    coeff += dense.entry(r, s).conj() * target[r * 4 + s];
                }
            }
            for r in 0..4 {
                for s in 0..4 {
                    recon[r * 4 + s] += coeff * dense.entry(r, s);
                }
            }
        }
        for (a, b) in recon.iter().zip(&target) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn four_qubit_code_corrects_one_erasure_but_not_one_general_error() {
        let code = four_qubit_code();
        assert!(check_erasure_kl(&code, 1).unwrap().passed);
        let general = check_general_kl(&code, 1).unwrap();
        assert!(!general.passed);
        assert!(general.witness.is_some());
    }

    #[test]
    fn repetition_pair_fails_erasure_check_with_witness() {
        let c00 = StateVector::from_terms(2, &[("00", c(1.0))]).unwrap();
        let c11 = StateVector::from_terms(2, &[("11", c(1.0))]).unwrap();
        let code = QuantumCode::new(vec![c00, c11]).unwrap();
        let report = check_erasure_kl(&code, 1).unwrap();
        assert!(!report.passed);
        let witness = report.witness.unwrap();
        assert_eq!(witness.positions.len(), 1);
        // The expectation of |0⟩⟨0| differs between the codewords.
        assert!(report.worst_expectation_gap > 0.5);
    }

    #[test]
    fn t_zero_passes_trivially() {
        let code = four_qubit_code();
        assert!(check_general_kl(&code, 0).unwrap().passed);
        assert!(check_erasure_kl(&code, 0).unwrap().passed);
    }

    #[test]
    fn direct_pair_mode_agrees_with_erasure_form() {
        let code = four_qubit_code();
        let via_erasure = check_general_kl(&code, 1).unwrap();
        let direct = check_general_kl_direct(&code, 1).unwrap();
        assert_eq!(via_erasure.passed, direct.passed);

        let mut rng = crate::stream_rng(17, 3);
        let random = haar_random_code(3, 2, &mut rng).unwrap();
        assert_eq!(
            check_general_kl(&random, 1).unwrap().passed,
            check_general_kl_direct(&random, 1).unwrap().passed
        );
    }

    #[test]
    fn implication_is_vacuous_for_the_four_qubit_code() {
        let code = four_qubit_code();
        assert!(erasure_implies_general(&code, 1).unwrap());
    }

    #[test]
    fn product_state_in_trivial_span() {
        let b1 = StateVector::from_terms(2, &[("00", c(1.0))]).unwrap();
        let b2 = StateVector::from_terms(2, &[("01", c(1.0))]).unwrap();
        let result = find_product_state(&b1, &b2).unwrap();
        assert!(result.found);
        // c₁ = 0 branch: returns b₁ itself.
        assert_abs_diff_eq!(result.state.inner(&b1).norm(), 1.0, epsilon = 1e-12);
        assert!(result.residual() < 1e-12);
    }

    #[test]
    fn product_state_in_bell_span() {
        let b1 = StateVector::from_terms(2, &[("00", c(1.0)), ("11", c(1.0))]).unwrap();
        let b2 = StateVector::from_terms(2, &[("00", c(1.0)), ("11", c(-1.0))]).unwrap();
        let result = find_product_state(&b1, &b2).unwrap();
        let (c1, c12, c2) = result.coefficients;
        assert_abs_diff_eq!(c1.re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c12.norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c2.re, -0.5, epsilon = 1e-12);
        // η₁ = ±η₂ lands on |00⟩ or |11⟩.
        let on_00 = result.state.amplitude("00").unwrap().norm();
        let on_11 = result.state.amplitude("11").unwrap().norm();
        assert!(on_00 > 1.0 - 1e-9 || on_11 > 1.0 - 1e-9);
        assert!(result.residual() < 1e-12);
    }

    #[test]
    fn product_state_rejects_dependent_inputs() {
        let b1 = StateVector::from_terms(2, &[("00", c(1.0)), ("11", c(1.0))]).unwrap();
        let b2 = StateVector::from_terms(2, &[("11", c(-1.0)), ("00", c(-1.0))]).unwrap();
        assert!(matches!(
            find_product_state(&b1, &b2),
            Err(Error::LinearlyDependent)
        ));
    }

    #[test]
    fn factor_detection_examples() {
        // Explicit |0⟩ factor in front.
        let a = StateVector::from_terms(3, &[("000", c(1.0))]).unwrap();
        let b = StateVector::from_terms(3, &[("011", c(1.0))]).unwrap();
        let code = QuantumCode::new(vec![a, b]).unwrap();
        let (position, theta) = detect_factor(&code).unwrap();
        assert_eq!(position, 1);
        assert_abs_diff_eq!(theta.amplitudes()[0].norm(), 1.0, epsilon = 1e-9);

        // Hidden |0⟩ factor at the third position.
        let a = StateVector::from_terms(3, &[("000", c(1.0)), ("110", c(1.0))]).unwrap();
        let b = StateVector::from_terms(3, &[("010", c(1.0)), ("100", c(1.0))]).unwrap();
        let code = QuantumCode::new(vec![a, b]).unwrap();
        let (position, theta) = detect_factor(&code).unwrap();
        assert_eq!(position, 3);
        assert_abs_diff_eq!(theta.amplitudes()[0].norm(), 1.0, epsilon = 1e-9);

        // The four-qubit code has maximally mixed single-qubit marginals.
        assert!(detect_factor(&four_qubit_code()).is_none());
    }

    #[test]
    fn shorten_code_examples() {
        let a = StateVector::from_terms(3, &[("000", c(1.0))]).unwrap();
        let b = StateVector::from_terms(3, &[("011", c(1.0))]).unwrap();
        let code = QuantumCode::new(vec![a, b]).unwrap();
        let short = shorten_code(&code, 1).unwrap();
        assert_eq!(short.num_qubits(), 2);
        assert_abs_diff_eq!(
            short.codeword(0).amplitude("00").unwrap().norm(),
            1.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            short.codeword(1).amplitude("11").unwrap().norm(),
            1.0,
            epsilon = 1e-9
        );

        let a = StateVector::from_terms(3, &[("000", c(1.0)), ("110", c(1.0))]).unwrap();
        let b = StateVector::from_terms(3, &[("010", c(1.0)), ("100", c(1.0))]).unwrap();
        let code = QuantumCode::new(vec![a, b]).unwrap();
        let short = shorten_code(&code, 3).unwrap();
        let bell = StateVector::from_terms(2, &[("00", c(1.0)), ("11", c(1.0))]).unwrap();
        assert_abs_diff_eq!(short.codeword(0).inner(&bell).norm(), 1.0, epsilon = 1e-9);

        for position in 1..=4 {
            assert!(matches!(
                shorten_code(&four_qubit_code(), position),
                Err(Error::NotAFactor { .. })
            ));
        }
    }

    #[test]
    fn falsification_rejects_other_lengths() {
        assert!(falsify_short_codes(4, 1, 0).is_err());
    }

    #[test]
    fn falsification_smoke() {
        assert_eq!(falsify_short_codes(2, 50, 123).unwrap(), 0);
        assert_eq!(falsify_short_codes(3, 50, 123).unwrap(), 0);
    }
}
