use std::time::Instant;

use num_complex::Complex64;

use super::report::{Tolerances, VerificationReport};
use crate::error::{Error, Result};
use crate::model::{
    canonical_pair, ladder_matrix, on_first_factor, on_second_factor, osc_hamiltonian_ladder_form, LadderKind,
    PhysicalParams,
};

/// Side of each factor in the tensor-product commutator check.
pub const DEFAULT_TENSOR_DIM: usize = 12;

/// Ladder and oscillator commutators on an N-level truncation.
///
/// Reports, in order: [b′, b′†] = I on the (N−1)-block, its corner entry 1 − N,
/// [b, b†] = 2mħω_c on the block (relative), [Q, P] = iħ on the block
/// (relative) and [H₁ ⊗ I, I ⊗ H₂] = 0 on a `tensor_dim`² space.
pub fn check_commutators(
    n: usize,
    tensor_dim: usize,
    p: &PhysicalParams,
    tol: &Tolerances,
) -> Result<Vec<VerificationReport>> {
    if n < 3 {
        return Err(Error::domain(
            "check_commutators",
            format!("N = {n} must be at least 3"),
        ));
    }
    if tensor_dim < 2 {
        return Err(Error::domain(
            "check_commutators",
            format!("tensor_dim = {tensor_dim} must be at least 2"),
        ));
    }
    let mut out = Vec::new();

    let start = Instant::now();
    let bp = ladder_matrix(LadderKind::BPrime, n, p)?;
    let bpd = ladder_matrix(LadderKind::BPrimeDag, n, p)?;
    let c = bp.commutator_compensated(&bpd)?;
    let block = c.max_dev_from_scaled_identity(Complex64::new(1.0, 0.0));
    out.push(
        VerificationReport::new("commutator_b_prime", block, tol.commutator)
            .param("n", n)
            .param("block", c.trusted())
            .timed(start),
    );
    let corner = c.get(n - 1, n - 1);
    let target = 1.0 - n as f64;
    out.push(
        VerificationReport::new(
            "commutator_b_prime_corner",
            (corner - Complex64::new(target, 0.0)).norm(),
            tol.commutator_corner,
        )
        .param("n", n)
        .detail("corner", corner.re)
        .detail("expected", target)
        .timed(start),
    );

    let start = Instant::now();
    let b = ladder_matrix(LadderKind::B, n, p)?;
    let bd = ladder_matrix(LadderKind::BDag, n, p)?;
    let s2 = p.ladder_scale_sq();
    let c = b.commutator_compensated(&bd)?;
    out.push(
        VerificationReport::new(
            "commutator_b",
            c.max_dev_from_scaled_identity(Complex64::new(s2, 0.0)) / s2,
            tol.commutator_scaled,
        )
        .param("n", n)
        .param("scale", s2)
        .timed(start),
    );

    let start = Instant::now();
    let (q, pm) = canonical_pair(n, p)?;
    let c = q.commutator_compensated(&pm)?;
    out.push(
        VerificationReport::new(
            "commutator_canonical",
            c.max_dev_from_scaled_identity(Complex64::new(0.0, p.hbar)) / p.hbar,
            tol.commutator_scaled,
        )
        .param("n", n)
        .timed(start),
    );

    let start = Instant::now();
    let h = osc_hamiltonian_ladder_form(tensor_dim, p)?;
    let h1 = on_first_factor(&h, tensor_dim);
    let h2 = on_second_factor(tensor_dim, &h);
    let c = h1.commutator(&h2)?;
    out.push(
        VerificationReport::new("commutator_tensor", c.max_abs(), tol.commutator_exact)
            .param("tensor_dim", tensor_dim)
            .timed(start),
    );
    Ok(out)
}
