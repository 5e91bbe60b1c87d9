use crate::field::FieldElement;
use crate::linalg::GfMatrix;

use super::{row_code_check, GpcError, GpcParams, SymbolArray};

/// A codeword of weight `(s_hat(j+1) + 1)(u_j + 1)` supported exactly on
/// `rows x cols`.
///
/// It is the outer product of a row-code word of level `j` supported on
/// `cols` with a vector on `rows` annihilated by the first `s_hat(j+1)`
/// weighted-sum constraints.
pub fn min_weight_codeword(
    params: &GpcParams,
    level: usize,
    rows: &[usize],
    cols: &[usize],
) -> Result<SymbolArray, GpcError> {
    if level >= params.t() {
        return Err(GpcError::NoSuchLevel { level, t: params.t() });
    }
    let f = params.field();
    let nrows = params.s_hat(level + 1) + 1;
    let ncols = params.u()[level] + 1;
    check_support(rows, nrows, params.m())?;
    check_support(cols, ncols, params.n())?;

    let h = row_code_check(f, params.u()[level], params.n()).select_columns(cols);
    let w = single_null_vector(&h, f);
    let row_nodes: Vec<FieldElement> = rows.iter().map(|&r| f.alpha_pow(r as i64)).collect();
    let v = single_null_vector(
        &GfMatrix::vandermonde(f, &row_nodes, nrows - 1).expect("distinct rows"),
        f,
    );

    let mut arr = SymbolArray::zeros(params.m(), params.n());
    for (&r, &a) in rows.iter().zip(&v) {
        for (&c, &b) in cols.iter().zip(&w) {
            arr.set(r, c, f.mul(a, b));
        }
    }
    Ok(arr)
}

fn check_support(idx: &[usize], expected: usize, bound: usize) -> Result<(), GpcError> {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != expected || idx.len() != expected || sorted.last().is_some_and(|&x| x >= bound) {
        return Err(GpcError::BadSupport {
            expected,
            got: idx.to_vec(),
        });
    }
    Ok(())
}

// An (r x (r+1)) Vandermonde-type matrix of full rank has a one-dimensional
// null space whose generator has no zero entry.
fn single_null_vector(h: &GfMatrix, f: &crate::field::Field) -> Vec<FieldElement> {
    if h.rows() == 0 {
        return vec![FieldElement::ONE];
    }
    let mut ns = h.null_space(f);
    debug_assert_eq!(ns.len(), 1);
    ns.pop().expect("one-dimensional null space")
}
