use crate::error::{Error, Result};
use crate::shift::ShiftSpace;

fn reachable(a: &[Vec<u64>], forward: bool) -> Vec<bool> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            let w = if forward { a[u][v] } else { a[v][u] };
            if w > 0 && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Strongly connected with at least one edge.
pub fn is_irreducible_matrix(a: &[Vec<u64>]) -> bool {
    !a.is_empty()
        && a.iter().all(|r| r.len() == a.len())
        && a.iter().flatten().any(|&x| x > 0)
        && reachable(a, true).iter().all(|&s| s)
        && reachable(a, false).iter().all(|&s| s)
}

/// The nm×nm block-cyclic matrix with B in blocks (i, i+1) and (n−1, 0).
pub fn build_bn_matrix(b: &[Vec<u64>], n: usize) -> Result<Vec<Vec<u64>>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if !is_irreducible_matrix(b) {
        return Err(Error::NotIrreducible);
    }
    let m = b.len();
    let mut out = vec![vec![0u64; n * m]; n * m];
    for blk in 0..n {
        let next = (blk + 1) % n;
        for i in 0..m {
            for j in 0..m {
                out[blk * m + i][next * m + j] = b[i][j];
            }
        }
    }
    Ok(out)
}

/// Edge shift of [`build_bn_matrix`]: entropy h(X_B), period n for primitive B.
pub fn build_bn(b: &[Vec<u64>], n: usize) -> Result<ShiftSpace> {
    ShiftSpace::edge_shift(build_bn_matrix(b, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::entropy;
    use crate::shift::structure;

    #[test]
    fn small_cases() {
        assert_eq!(build_bn_matrix(&[vec![2]], 2).unwrap(), vec![vec![0, 2], vec![2, 0]]);
        let g = vec![vec![1, 1], vec![1, 0]];
        assert_eq!(build_bn_matrix(&g, 1).unwrap(), g);
        let b3 = build_bn(&g, 3).unwrap();
        assert_eq!(structure(&b3).unwrap().period, 3);
        assert_eq!(entropy(&b3).unwrap(), entropy(&ShiftSpace::edge_shift(g).unwrap()).unwrap());
        assert_eq!(build_bn_matrix(&[vec![1, 1], vec![0, 1]], 2).unwrap_err(), Error::NotIrreducible);
    }
}
