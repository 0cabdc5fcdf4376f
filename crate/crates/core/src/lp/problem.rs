use super::LpError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

impl RowSense {
    /// Activity interval `[lo, hi]` admitted by a row with right-hand side `rhs`.
    pub fn activity_bounds(self, rhs: f64) -> (f64, f64) {
        match self {
            RowSense::Le => (f64::NEG_INFINITY, rhs),
            RowSense::Eq => (rhs, rhs),
            RowSense::Ge => (rhs, f64::INFINITY),
        }
    }
}

/// Minimization problem `min c'x + offset` over `lo <= x <= hi` and rows
/// `a_i x (<=|=|>=) b_i`, with the matrix stored row-major without duplicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub(crate) cost: Vec<f64>,
    pub(crate) offset: f64,
    pub(crate) lower: Vec<f64>,
    pub(crate) upper: Vec<f64>,
    pub(crate) var_names: Vec<String>,
    pub(crate) sense: Vec<RowSense>,
    pub(crate) rhs: Vec<f64>,
    pub(crate) row_names: Vec<String>,
    pub(crate) row_start: Vec<usize>,
    pub(crate) col_index: Vec<usize>,
    pub(crate) values: Vec<f64>,
}

impl LpProblem {
    pub fn n_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn sense(&self) -> &[RowSense] {
        &self.sense
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn var_name(&self, j: usize) -> &str {
        &self.var_names[j]
    }

    pub fn row_name(&self, i: usize) -> &str {
        &self.row_names[i]
    }

    /// Entries `(column, value)` of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (s, e) = (self.row_start[i], self.row_start[i + 1]);
        self.col_index[s..e]
            .iter()
            .copied()
            .zip(self.values[s..e].iter().copied())
    }

    /// `A x`, one entry per row.
    pub fn row_activity(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_rows())
            .map(|i| self.row(i).map(|(j, a)| a * x[j]).sum())
            .collect()
    }

    /// `A' y`, one entry per variable.
    pub fn transpose_product(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_vars()];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (j, a) in self.row(i) {
                out[j] += a * yi;
            }
        }
        out
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.offset + self.cost.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }

    pub fn set_objective(&mut self, cost: Vec<f64>, offset: f64) -> Result<(), LpError> {
        if cost.len() != self.n_vars() {
            return Err(LpError::Dimension(format!(
                "objective has {} entries for {} variables",
                cost.len(),
                self.n_vars()
            )));
        }
        if let Some(j) = cost.iter().position(|c| !c.is_finite()) {
            return Err(LpError::NonFinite(format!("cost of {}", self.var_names[j])));
        }
        self.cost = cost;
        self.offset = offset;
        Ok(())
    }

    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) -> Result<(), LpError> {
        check_bounds(&self.var_names[var.0], lower, upper)?;
        self.lower[var.0] = lower;
        self.upper[var.0] = upper;
        Ok(())
    }

    /// Appends a row; entries for the same column are summed.
    pub fn push_row(
        &mut self,
        name: impl Into<String>,
        sense: RowSense,
        rhs: f64,
        coeffs: &[(VarId, f64)],
    ) -> Result<RowId, LpError> {
        let name = name.into();
        if !rhs.is_finite() {
            return Err(LpError::NonFinite(format!("right-hand side of {name}")));
        }
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for &(v, a) in coeffs {
            if v.0 >= self.n_vars() {
                return Err(LpError::Dimension(format!(
                    "row {name} references variable {}",
                    v.0
                )));
            }
            if !a.is_finite() {
                return Err(LpError::NonFinite(format!("coefficient in row {name}")));
            }
            entries.push((v.0, a));
        }
        merge_entries(&mut entries);
        for (j, a) in entries {
            self.col_index.push(j);
            self.values.push(a);
        }
        self.row_start.push(self.col_index.len());
        self.sense.push(sense);
        self.rhs.push(rhs);
        self.row_names.push(name);
        Ok(RowId(self.rhs.len() - 1))
    }

    /// Column-major copy of the constraint matrix.
    pub(crate) fn to_csc(&self) -> CscMatrix {
        let n = self.n_vars();
        let mut counts = vec![0usize; n + 1];
        for &j in &self.col_index {
            counts[j + 1] += 1;
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let col_start = counts.clone();
        let mut next = counts;
        let mut row_index = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for i in 0..self.n_rows() {
            for k in self.row_start[i]..self.row_start[i + 1] {
                let j = self.col_index[k];
                let p = next[j];
                row_index[p] = i;
                values[p] = self.values[k];
                next[j] += 1;
            }
        }
        CscMatrix {
            col_start,
            row_index,
            values,
        }
    }

    /// Stable 64-bit FNV-1a fingerprint over dimensions, names, senses and the
    /// bit patterns of every number.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        h.usize(self.n_vars());
        h.usize(self.n_rows());
        h.f64(self.offset);
        for j in 0..self.n_vars() {
            h.f64(self.cost[j]);
            h.f64(self.lower[j]);
            h.f64(self.upper[j]);
            h.bytes(self.var_names[j].as_bytes());
        }
        for i in 0..self.n_rows() {
            h.usize(self.sense[i] as usize);
            h.f64(self.rhs[i]);
            h.bytes(self.row_names[i].as_bytes());
            for (j, a) in self.row(i) {
                h.usize(j);
                h.f64(a);
            }
        }
        h.finish()
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn bytes(&mut self, b: &[u8]) {
        for &x in b {
            self.0 ^= u64::from(x);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
        self.bytes_sep();
    }

    fn bytes_sep(&mut self) {
        self.0 ^= 0xff;
        self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
    }

    fn usize(&mut self, v: usize) {
        for x in (v as u64).to_le_bytes() {
            self.0 ^= u64::from(x);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    fn f64(&mut self, v: f64) {
        // -0.0 and 0.0 hash alike
        let v = if v == 0.0 { 0.0 } else { v };
        self.usize(v.to_bits() as usize);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CscMatrix {
    pub col_start: Vec<usize>,
    pub row_index: Vec<usize>,
    pub values: Vec<f64>,
}

impl CscMatrix {
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.col_start[j], self.col_start[j + 1]);
        (&self.row_index[s..e], &self.values[s..e])
    }

    /// Row-major copy `(row_start, col_index, values)` for `m` rows.
    pub fn to_rows(&self, m: usize) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
        let mut start = vec![0usize; m + 1];
        for &i in &self.row_index {
            start[i + 1] += 1;
        }
        for i in 0..m {
            start[i + 1] += start[i];
        }
        let mut next = start.clone();
        let mut cols = vec![0; self.row_index.len()];
        let mut vals = vec![0.0; self.row_index.len()];
        for j in 0..self.col_start.len() - 1 {
            for p in self.col_start[j]..self.col_start[j + 1] {
                let i = self.row_index[p];
                cols[next[i]] = j;
                vals[next[i]] = self.values[p];
                next[i] += 1;
            }
        }
        (start, cols, vals)
    }
}

fn check_bounds(name: &str, lower: f64, upper: f64) -> Result<(), LpError> {
    if lower.is_nan() || upper.is_nan() || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
        return Err(LpError::NonFinite(format!("bounds of {name}")));
    }
    if lower > upper {
        return Err(LpError::Bounds(format!(
            "{name}: lower {lower} > upper {upper}"
        )));
    }
    Ok(())
}

fn merge_entries(entries: &mut Vec<(usize, f64)>) {
    entries.sort_by_key(|&(j, _)| j);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
    for &(j, a) in entries.iter() {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += a,
            _ => out.push((j, a)),
        }
    }
    out.retain(|&(_, a)| a != 0.0);
    *entries = out;
}

/// Incremental assembly of an [`LpProblem`].
#[derive(Debug, Default, Clone)]
pub struct LpBuilder {
    cost: Vec<f64>,
    offset: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    var_names: Vec<String>,
    rows: Vec<(String, RowSense, f64, Vec<(usize, f64)>)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(vars: usize, rows: usize) -> Self {
        Self {
            cost: Vec::with_capacity(vars),
            offset: 0.0,
            lower: Vec::with_capacity(vars),
            upper: Vec::with_capacity(vars),
            var_names: Vec::with_capacity(vars),
            rows: Vec::with_capacity(rows),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, cost: f64, lower: f64, upper: f64) -> VarId {
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.var_names.push(name.into());
        VarId(self.cost.len() - 1)
    }

    pub fn n_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_cost(&mut self, var: VarId, cost: f64) {
        self.cost[var.0] = cost;
    }

    pub fn set_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    pub fn add_row<I>(
        &mut self,
        name: impl Into<String>,
        sense: RowSense,
        rhs: f64,
        coeffs: I,
    ) -> RowId
    where
        I: IntoIterator<Item = (VarId, f64)>,
    {
        let entries = coeffs.into_iter().map(|(v, a)| (v.0, a)).collect();
        self.rows.push((name.into(), sense, rhs, entries));
        RowId(self.rows.len() - 1)
    }

    pub fn build(self) -> Result<LpProblem, LpError> {
        let n = self.cost.len();
        for j in 0..n {
            check_bounds(&self.var_names[j], self.lower[j], self.upper[j])?;
            if !self.cost[j].is_finite() {
                return Err(LpError::NonFinite(format!("cost of {}", self.var_names[j])));
            }
        }
        if !self.offset.is_finite() {
            return Err(LpError::NonFinite("objective offset".into()));
        }
        let nnz: usize = self.rows.iter().map(|r| r.3.len()).sum();
        let mut p = LpProblem {
            cost: self.cost,
            offset: self.offset,
            lower: self.lower,
            upper: self.upper,
            var_names: self.var_names,
            sense: Vec::with_capacity(self.rows.len()),
            rhs: Vec::with_capacity(self.rows.len()),
            row_names: Vec::with_capacity(self.rows.len()),
            row_start: Vec::with_capacity(self.rows.len() + 1),
            col_index: Vec::with_capacity(nnz),
            values: Vec::with_capacity(nnz),
        };
        p.row_start.push(0);
        for (name, sense, rhs, entries) in self.rows {
            let coeffs: Vec<(VarId, f64)> =
                entries.into_iter().map(|(j, a)| (VarId(j), a)).collect();
            p.push_row(name, sense, rhs, &coeffs)?;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_merged_and_zeros_dropped() {
        let mut b = LpBuilder::new();
        let x = b.add_var("x", 1.0, 0.0, 1.0);
        let y = b.add_var("y", 1.0, 0.0, 1.0);
        b.add_row(
            "r",
            RowSense::Le,
            1.0,
            [(y, 1.0), (x, 2.0), (x, 0.5), (y, -1.0)],
        );
        let p = b.build().unwrap();
        let row: Vec<_> = p.row(0).collect();
        assert_eq!(row, vec![(0, 2.5)]);
    }

    #[test]
    fn assembly_errors() {
        let mut b = LpBuilder::new();
        b.add_var("x", 0.0, 2.0, 1.0);
        assert!(matches!(b.build(), Err(LpError::Bounds(_))));

        let mut b = LpBuilder::new();
        b.add_var("x", 0.0, 0.0, 1.0);
        b.add_row("r", RowSense::Eq, 1.0, [(VarId(3), 1.0)]);
        assert!(matches!(b.build(), Err(LpError::Dimension(_))));
    }

    #[test]
    fn csc_matches_rows() {
        let mut b = LpBuilder::new();
        let v: Vec<_> = (0..3)
            .map(|j| b.add_var(format!("x{j}"), 0.0, 0.0, 1.0))
            .collect();
        b.add_row("a", RowSense::Le, 1.0, [(v[0], 1.0), (v[2], 3.0)]);
        b.add_row("b", RowSense::Ge, 1.0, [(v[1], 2.0), (v[2], 4.0)]);
        let p = b.build().unwrap();
        let csc = p.to_csc();
        assert_eq!(csc.col(2), (&[0usize, 1][..], &[3.0, 4.0][..]));
        assert_eq!(csc.col(0), (&[0usize][..], &[1.0][..]));
    }

    #[test]
    fn fingerprint_sensitive_to_data() {
        let mk = |rhs: f64| {
            let mut b = LpBuilder::new();
            let x = b.add_var("x", 1.0, 0.0, 1.0);
            b.add_row("r", RowSense::Le, rhs, [(x, 1.0)]);
            b.build().unwrap()
        };
        assert_eq!(mk(1.0).fingerprint(), mk(1.0).fingerprint());
        assert_ne!(mk(1.0).fingerprint(), mk(2.0).fingerprint());
    }
}
