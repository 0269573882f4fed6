use serde::{Deserialize, Serialize};

use crate::lattice::Color;

/// Exchange and monodromy phases (±1) between boson colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatisticsTable {
    /// `exchange[c][c']`; only the diagonal is physical.
    pub exchange: [[i8; 3]; 3],
    pub monodromy: [[i8; 3]; 3],
}

impl StatisticsTable {
    /// Fermions of each color with mutual semionic statistics.
    pub fn color_code() -> Self {
        let mut monodromy = [[-1; 3]; 3];
        let mut exchange = [[1; 3]; 3];
        for c in 0..3 {
            monodromy[c][c] = 1;
            exchange[c][c] = -1;
        }
        StatisticsTable {
            exchange,
            monodromy,
        }
    }

    pub fn exchange(&self, a: Color, b: Color) -> i8 {
        self.exchange[a.index()][b.index()]
    }

    pub fn monodromy(&self, a: Color, b: Color) -> i8 {
        self.monodromy[a.index()][b.index()]
    }

    /// Symmetric, and `monodromy(c,c) = exchange(c,c)²`.
    pub fn is_consistent(&self) -> bool {
        (0..3).all(|a| {
            (0..3).all(|b| {
                self.monodromy[a][b] == self.monodromy[b][a]
                    && self.exchange[a][b] == self.exchange[b][a]
            }) && self.monodromy[a][a] == self.exchange[a][a] * self.exchange[a][a]
        })
    }
}

impl Default for StatisticsTable {
    fn default() -> Self {
        Self::color_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_code_table() {
        let t = StatisticsTable::color_code();
        assert!(t.is_consistent());
        for a in Color::ALL {
            assert_eq!(t.exchange(a, a), -1);
            for b in Color::ALL {
                assert_eq!(t.monodromy(a, b), if a == b { 1 } else { -1 });
            }
        }
    }
}
