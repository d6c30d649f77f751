//! Dense complex matrix helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(d: usize) -> CMatrix {
    CMatrix::zeros(d, d)
}

pub fn from_real_diagonal(diag: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        diag.len(),
        diag.iter().map(|&x| c(x, 0.0)),
    ))
}

/// Row-major construction from real entries.
pub fn from_real_rows(d: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(d, d, entries.iter().map(|&x| c(x, 0.0)))
}

/// `|v⟩⟨v|` for an unnormalised vector.
pub fn ket_bra(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Projector onto the normalised version of `v`.
pub fn projector_onto(v: &CVector) -> CMatrix {
    let n = v.norm();
    ket_bra(&(v / c(n, 0.0)))
}

pub fn basis_vector(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = c(1.0, 0.0);
    v
}

/// The matrix unit `|i⟩⟨j|`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(d);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// `‖m − m†‖` in operator norm.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    op_norm(&(m - m.adjoint()))
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Function of a Hermitian matrix through its eigendecomposition.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let mapped = from_real_diagonal(&values.iter().map(|&x| f(x)).collect::<Vec<_>>());
    &vectors * mapped * vectors.adjoint()
}

/// Square root of a PSD matrix; negative eigenvalues from numerical drift
/// are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |x| x.max(0.0).sqrt())
}

/// `‖P² − P‖ + ‖P − P†‖`, zero exactly for orthogonal projectors.
pub fn projector_residual(p: &CMatrix) -> f64 {
    op_norm(&(p * p - p)).max(hermiticity_residual(p))
}

/// `Re tr(a b)` without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let d = a.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// Extends the orthonormal columns of `cols` to an orthonormal basis of
/// `C^dim`, trying standard basis vectors in index order.
pub fn complete_orthonormal_basis(cols: &[CVector], dim: usize) -> Vec<CVector> {
    let mut basis: Vec<CVector> = cols.to_vec();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = basis_vector(dim, k);
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
        }
        let n = v.norm();
        if n > 1e-7 {
            basis.push(v / c(n, 0.0));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_basis_projectors() {
        let p0 = matrix_unit(2, 0, 0);
        let p1 = matrix_unit(2, 1, 1);
        let k = kron(&p0, &p1);
        assert_eq!(k.nrows(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (1, 1) { 1.0 } else { 0.0 };
                assert_eq!(k[(i, j)], c(expected, 0.0));
            }
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let m = from_real_rows(2, &[0.75, 0.25, 0.25, 0.25]);
        let s = psd_sqrt(&m);
        assert!(op_norm(&(&s * &s - &m)) < 1e-12);
    }

    #[test]
    fn eigenvalues_sorted() {
        let m = from_real_diagonal(&[3.0, -1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&m), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn completion_is_unitary() {
        let v = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)]);
        let basis = complete_orthonormal_basis(&[v], 3);
        let u = CMatrix::from_columns(&basis);
        assert!(op_norm(&(u.adjoint() * &u - identity(3))) < 1e-12);
    }
}
