use crate::error::{Error, Result};
use crate::pauli::PauliString;

struct Row {
    bits: Vec<u64>,
    combo: Vec<u64>,
}

fn xor_into(a: &mut [u64], b: &[u64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
}

fn test_bit(v: &[u64], k: usize) -> bool {
    v[k / 64] >> (k % 64) & 1 == 1
}

/// Gaussian elimination; returns the rank and the combinations of
/// generators that reduce to zero.
fn eliminate(generators: &[PauliString]) -> Result<(usize, Vec<Vec<usize>>)> {
    let Some(first) = generators.first() else {
        return Ok((0, Vec::new()));
    };
    let n = first.num_qubits();
    let m = generators.len();
    let mut rows = Vec::with_capacity(m);
    for (k, g) in generators.iter().enumerate() {
        if g.num_qubits() != n {
            return Err(Error::Dimension {
                expected: n,
                found: g.num_qubits(),
            });
        }
        let mut bits = g.x_words().to_vec();
        bits.extend_from_slice(g.z_words());
        let mut combo = vec![0u64; m.div_ceil(64)];
        combo[k / 64] |= 1 << (k % 64);
        rows.push(Row { bits, combo });
    }
    let words = n.div_ceil(64);
    let columns: Vec<usize> = (0..n).chain((0..n).map(|q| 64 * words + q)).collect();
    let mut rank = 0;
    for &col in &columns {
        let Some(p) = (rank..m).find(|&r| test_bit(&rows[r].bits, col)) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for r in tail.iter_mut() {
            if test_bit(&r.bits, col) {
                xor_into(&mut r.bits, &pivot.bits);
                xor_into(&mut r.combo, &pivot.combo);
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    let kernel = rows[rank..]
        .iter()
        .map(|r| (0..m).filter(|&k| test_bit(&r.combo, k)).collect())
        .collect();
    Ok((rank, kernel))
}

/// GF(2) rank of the stacked `(x|z)` masks; phases are ignored.
pub fn symplectic_rank(generators: &[PauliString]) -> Result<usize> {
    Ok(eliminate(generators)?.0)
}

/// A basis of generator subsets whose product is proportional to the
/// identity. Its size is `generators.len() - rank`.
pub fn symplectic_dependencies(generators: &[PauliString]) -> Result<Vec<Vec<usize>>> {
    Ok(eliminate(generators)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn product_is_dependent() {
        let g = [p("XI"), p("IX"), p("XX")];
        assert_eq!(symplectic_rank(&g).unwrap(), 2);
        assert_eq!(symplectic_dependencies(&g).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn empty_and_phase_blind() {
        assert_eq!(symplectic_rank(&[]).unwrap(), 0);
        assert_eq!(symplectic_rank(&[p("XZ"), p("-XZ")]).unwrap(), 1);
        assert_eq!(symplectic_rank(&[p("Y"), p("X"), p("Z")]).unwrap(), 2);
    }

    #[test]
    fn mismatched_lengths() {
        assert!(symplectic_rank(&[p("X"), p("XX")]).is_err());
    }
}
