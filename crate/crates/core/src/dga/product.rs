use std::collections::HashMap;

use super::{Accumulator, Combination};

/// Sparse multiplication table on a basis: only nonzero products are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProductTable {
    /// `rows[a]` holds `(b, a·b)` sorted by `b`.
    rows: Vec<Vec<(usize, Combination)>>,
    /// `cols[b]` lists the `a` with `a·b ≠ 0`.
    cols: Vec<Vec<usize>>,
}

impl ProductTable {
    /// Builds a table from a product rule evaluated on every ordered pair of basis indices.
    pub fn from_fn(n: usize, mut rule: impl FnMut(usize, usize) -> Combination) -> Self {
        let mut rows = vec![Vec::new(); n];
        for (a, row) in rows.iter_mut().enumerate() {
            for b in 0..n {
                let c = rule(a, b);
                if !c.is_empty() {
                    row.push((b, c));
                }
            }
        }
        Self::from_rows(rows)
    }

    /// `entries` are (a, b, a·b); zero products may be omitted or passed as empty.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, Combination)>) -> Self {
        let mut rows = vec![Vec::new(); n];
        for (a, b, c) in entries {
            if !c.is_empty() {
                rows[a].push((b, c));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|(b, _)| *b);
        }
        Self::from_rows(rows)
    }

    fn from_rows(rows: Vec<Vec<(usize, Combination)>>) -> Self {
        let mut cols = vec![Vec::new(); rows.len()];
        for (a, row) in rows.iter().enumerate() {
            for (b, _) in row {
                cols[*b].push(a);
            }
        }
        ProductTable { rows, cols }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// a·b, empty when zero.
    pub fn get(&self, a: usize, b: usize) -> &[(usize, i64)] {
        match self.rows[a].binary_search_by_key(&b, |(x, _)| *x) {
            Ok(p) => &self.rows[a][p].1,
            Err(_) => &[],
        }
    }

    /// Nonzero products with `a` on the left.
    pub fn row(&self, a: usize) -> &[(usize, Combination)] {
        &self.rows[a]
    }

    /// Left factors `a` with `a·b ≠ 0`.
    pub fn left_factors(&self, b: usize) -> &[usize] {
        &self.cols[b]
    }

    pub fn nonzero_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn multiply(&self, x: &[(usize, i64)], y: &[(usize, i64)]) -> Combination {
        if let ([(a, u)], [(b, v)]) = (x, y) {
            return super::scale(self.get(*a, *b), u * v);
        }
        let mut acc = Accumulator::new();
        for &(a, u) in x {
            if self.rows[a].is_empty() {
                continue;
            }
            for &(b, v) in y {
                acc.add_all(self.get(a, b), u * v);
            }
        }
        acc.finish()
    }

    /// A copy with one coefficient of one stored product negated.
    pub fn with_flipped_entry(&self, a: usize, b: usize, term: usize) -> Self {
        let mut out = self.clone();
        if let Ok(p) = out.rows[a].binary_search_by_key(&b, |(x, _)| *x) {
            out.rows[a][p].1[term].1 *= -1;
        }
        out
    }

    /// Every stored (a, b, term) position, for fault injection.
    pub fn entry_positions(&self) -> Vec<(usize, usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().flat_map(move |(b, c)| (0..c.len()).map(move |t| (a, *b, t))))
            .collect()
    }

    /// Restricts to a sub-basis; `position` maps old indices to new ones.
    /// Products leaving the sub-basis are dropped.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let position: HashMap<usize, usize> = indices.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut entries = Vec::new();
        for (pa, &a) in indices.iter().enumerate() {
            for (b, c) in &self.rows[a] {
                let Some(&pb) = position.get(b) else { continue };
                let mapped: Option<Combination> = c.iter().map(|&(t, v)| position.get(&t).map(|&p| (p, v))).collect();
                if let Some(mut m) = mapped {
                    m.sort_unstable();
                    entries.push((pa, pb, m));
                }
            }
        }
        Self::from_entries(indices.len(), entries)
    }
}
