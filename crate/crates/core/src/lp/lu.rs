//! Sparse LU factorization of simplex bases.
//!
//! Left-looking elimination: each basis column is solved against the part of
//! `L` built so far (sparse triangular solve driven by a depth-first reach),
//! then a pivot row is chosen by threshold partial pivoting with a preference
//! for short rows. Basis changes between refactorizations are kept as a
//! product-form eta file.

/// Relative pivot threshold: candidates must reach this fraction of the
/// column's largest unpivoted magnitude.
const PIVOT_THRESHOLD: f64 = 0.1;
/// Absolute magnitude below which a column is treated as dependent.
const SINGULAR_TOL: f64 = 1e-11;

/// A basis matrix given column by column, with row indices in `0..m`.
pub(crate) trait BasisColumns {
    fn dim(&self) -> usize;
    fn column(&self, pos: usize, out: &mut Vec<(usize, f64)>);
}

#[derive(Debug)]
pub(crate) struct Singular {
    /// Basis positions whose columns could not be pivoted.
    pub positions: Vec<usize>,
    /// Rows left without a pivot, as many as `positions`.
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Eta {
    pos: usize,
    pivot: f64,
    start: usize,
    end: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct LuFactors {
    m: usize,
    pivot_row: Vec<usize>,
    row_step: Vec<usize>,
    col_order: Vec<usize>,
    l_start: Vec<usize>,
    l_index: Vec<usize>,
    l_value: Vec<f64>,
    u_start: Vec<usize>,
    u_index: Vec<usize>,
    u_value: Vec<f64>,
    u_diag: Vec<f64>,
    // Row-wise copies for transposed solves: `ur_*` lists, per step `s`, the
    // entries `U[s][k]` with `k > s`; `lr_*` lists, per original row `i`, the
    // steps `k` whose `L` column holds row `i`.
    ur_start: Vec<usize>,
    ur_index: Vec<usize>,
    ur_value: Vec<f64>,
    lr_start: Vec<usize>,
    lr_index: Vec<usize>,
    lr_value: Vec<f64>,
    etas: Vec<Eta>,
    eta_index: Vec<usize>,
    eta_value: Vec<f64>,
    work: Vec<f64>,
}

const UNSET: usize = usize::MAX;

impl LuFactors {
    pub fn factorize<B: BasisColumns>(basis: &B) -> Result<LuFactors, Singular> {
        let m = basis.dim();
        let mut cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(m);
        let mut row_count = vec![0usize; m];
        let mut buf = Vec::new();
        for pos in 0..m {
            buf.clear();
            basis.column(pos, &mut buf);
            for &(i, _) in &buf {
                row_count[i] += 1;
            }
            cols.push(buf.clone());
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&p| (cols[p].len(), p));

        let mut f = LuFactors {
            m,
            pivot_row: Vec::with_capacity(m),
            row_step: vec![UNSET; m],
            col_order: Vec::with_capacity(m),
            l_start: vec![0],
            l_index: Vec::new(),
            l_value: Vec::new(),
            u_start: vec![0],
            u_index: Vec::new(),
            u_value: Vec::new(),
            u_diag: Vec::with_capacity(m),
            ur_start: Vec::new(),
            ur_index: Vec::new(),
            ur_value: Vec::new(),
            lr_start: Vec::new(),
            lr_index: Vec::new(),
            lr_value: Vec::new(),
            etas: Vec::new(),
            eta_index: Vec::new(),
            eta_value: Vec::new(),
            work: vec![0.0; m],
        };

        let mut w = vec![0.0; m];
        let mut in_pattern = vec![false; m];
        let mut pattern: Vec<usize> = Vec::new();
        let mut visited = vec![usize::MAX; m];
        let mut topo: Vec<usize> = Vec::new();
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut bad_positions = Vec::new();

        for (k_col, &pos) in order.iter().enumerate() {
            pattern.clear();
            for &(i, v) in &cols[pos] {
                w[i] += v;
                if !in_pattern[i] {
                    in_pattern[i] = true;
                    pattern.push(i);
                }
            }
            // Reach of the column through L, in topological order.
            topo.clear();
            for idx in 0..pattern.len() {
                let start = pattern[idx];
                if f.row_step[start] == UNSET || visited[start] == k_col {
                    continue;
                }
                visited[start] = k_col;
                stack.push((start, f.l_start[f.row_step[start]]));
                while let Some(top) = stack.len().checked_sub(1) {
                    let (row, mut next) = stack[top];
                    let end = f.l_start[f.row_step[row] + 1];
                    let mut child_found = None;
                    while next < end {
                        let child = f.l_index[next];
                        next += 1;
                        if f.row_step[child] != UNSET && visited[child] != k_col {
                            child_found = Some(child);
                            break;
                        }
                    }
                    stack[top].1 = next;
                    match child_found {
                        Some(c) => {
                            visited[c] = k_col;
                            stack.push((c, f.l_start[f.row_step[c]]));
                        }
                        None => {
                            stack.pop();
                            topo.push(row);
                        }
                    }
                }
            }
            for &row in topo.iter().rev() {
                let step = f.row_step[row];
                let v = w[row];
                if v == 0.0 {
                    continue;
                }
                for p in f.l_start[step]..f.l_start[step + 1] {
                    let i = f.l_index[p];
                    w[i] -= f.l_value[p] * v;
                    if !in_pattern[i] {
                        in_pattern[i] = true;
                        pattern.push(i);
                    }
                }
            }

            let mut amax = 0.0f64;
            for &i in &pattern {
                if f.row_step[i] == UNSET {
                    amax = amax.max(w[i].abs());
                }
            }
            if amax < SINGULAR_TOL {
                bad_positions.push(pos);
                for &i in &pattern {
                    w[i] = 0.0;
                    in_pattern[i] = false;
                }
                continue;
            }
            let mut best = UNSET;
            for &i in &pattern {
                if f.row_step[i] != UNSET {
                    continue;
                }
                let a = w[i].abs();
                if a < PIVOT_THRESHOLD * amax {
                    continue;
                }
                if best == UNSET {
                    best = i;
                    continue;
                }
                let better = match row_count[i].cmp(&row_count[best]) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => {
                        let b = w[best].abs();
                        a > b || (a == b && i < best)
                    }
                };
                if better {
                    best = i;
                }
            }
            let step = f.pivot_row.len();
            let pivot = w[best];
            // U column: entries on already pivoted rows, in step space.
            let mut u_entries: Vec<(usize, f64)> = Vec::new();
            for &i in &pattern {
                let s = f.row_step[i];
                if s != UNSET && w[i] != 0.0 {
                    u_entries.push((s, w[i]));
                }
            }
            u_entries.sort_unstable_by_key(|&(s, _)| s);
            for (s, v) in u_entries {
                f.u_index.push(s);
                f.u_value.push(v);
            }
            f.u_start.push(f.u_index.len());
            f.u_diag.push(pivot);
            let mut l_entries: Vec<(usize, f64)> = Vec::new();
            for &i in &pattern {
                if f.row_step[i] == UNSET && i != best && w[i] != 0.0 {
                    l_entries.push((i, w[i] / pivot));
                }
            }
            l_entries.sort_unstable_by_key(|&(i, _)| i);
            for (i, v) in l_entries {
                f.l_index.push(i);
                f.l_value.push(v);
            }
            f.l_start.push(f.l_index.len());
            f.row_step[best] = step;
            f.pivot_row.push(best);
            f.col_order.push(pos);
            for &i in &pattern {
                w[i] = 0.0;
                in_pattern[i] = false;
            }
        }

        if !bad_positions.is_empty() {
            let rows: Vec<usize> = (0..m).filter(|&i| f.row_step[i] == UNSET).collect();
            return Err(Singular {
                positions: bad_positions,
                rows,
            });
        }
        (f.ur_start, f.ur_index, f.ur_value) = transpose(m, &f.u_start, &f.u_index, &f.u_value);
        (f.lr_start, f.lr_index, f.lr_value) = transpose(m, &f.l_start, &f.l_index, &f.l_value);
        Ok(f)
    }

    pub fn eta_nnz(&self) -> usize {
        self.eta_index.len()
    }

    pub fn factor_nnz(&self) -> usize {
        self.l_index.len() + self.u_index.len() + self.m
    }

    /// Solves `B x = rhs`. `rhs` is indexed by row and is overwritten with
    /// `x`, indexed by basis position.
    pub fn ftran(&mut self, rhs: &mut [f64]) {
        let m = self.m;
        for k in 0..m {
            let v = rhs[self.pivot_row[k]];
            if v == 0.0 {
                continue;
            }
            for p in self.l_start[k]..self.l_start[k + 1] {
                rhs[self.l_index[p]] -= self.l_value[p] * v;
            }
        }
        let z = &mut self.work;
        for k in 0..m {
            z[k] = rhs[self.pivot_row[k]];
        }
        for k in (0..m).rev() {
            let mut v = z[k];
            if v == 0.0 {
                continue;
            }
            v /= self.u_diag[k];
            z[k] = v;
            for p in self.u_start[k]..self.u_start[k + 1] {
                z[self.u_index[p]] -= self.u_value[p] * v;
            }
        }
        for k in 0..m {
            rhs[self.col_order[k]] = z[k];
        }
        for eta in &self.etas {
            let xr = rhs[eta.pos] / eta.pivot;
            rhs[eta.pos] = xr;
            if xr == 0.0 {
                continue;
            }
            for p in eta.start..eta.end {
                rhs[self.eta_index[p]] -= self.eta_value[p] * xr;
            }
        }
    }

    /// Solves `B' y = rhs`. `rhs` is indexed by basis position and is
    /// overwritten with `y`, indexed by row.
    pub fn btran(&mut self, rhs: &mut [f64]) {
        let m = self.m;
        for eta in self.etas.iter().rev() {
            let mut acc = rhs[eta.pos];
            for p in eta.start..eta.end {
                acc -= self.eta_value[p] * rhs[self.eta_index[p]];
            }
            rhs[eta.pos] = acc / eta.pivot;
        }
        let v = &mut self.work;
        for k in 0..m {
            v[k] = rhs[self.col_order[k]];
        }
        for k in 0..m {
            let x = v[k];
            if x == 0.0 {
                continue;
            }
            let x = x / self.u_diag[k];
            v[k] = x;
            for p in self.ur_start[k]..self.ur_start[k + 1] {
                v[self.ur_index[p]] -= self.ur_value[p] * x;
            }
        }
        for k in (0..m).rev() {
            let x = v[k];
            let row = self.pivot_row[k];
            rhs[row] = x;
            if x == 0.0 {
                continue;
            }
            for p in self.lr_start[row]..self.lr_start[row + 1] {
                v[self.lr_index[p]] -= self.lr_value[p] * x;
            }
        }
    }

    /// Records replacement of the column at basis position `pos` by a column
    /// whose solve against the current basis is `alpha` (position space).
    pub fn push_eta(&mut self, pos: usize, alpha: &[f64]) {
        let start = self.eta_index.len();
        for (i, &a) in alpha.iter().enumerate() {
            if i != pos && a != 0.0 {
                self.eta_index.push(i);
                self.eta_value.push(a);
            }
        }
        self.etas.push(Eta {
            pos,
            pivot: alpha[pos],
            start,
            end: self.eta_index.len(),
        });
    }
}

/// Compressed transpose: entry `(idx, val)` of group `k` becomes entry
/// `(k, val)` of group `idx`.
fn transpose(
    m: usize,
    start: &[usize],
    index: &[usize],
    value: &[f64],
) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    let mut counts = vec![0usize; m + 1];
    for &i in index {
        counts[i + 1] += 1;
    }
    for i in 0..m {
        counts[i + 1] += counts[i];
    }
    let mut next = counts.clone();
    let mut t_index = vec![0; index.len()];
    let mut t_value = vec![0.0; index.len()];
    for k in 0..start.len() - 1 {
        for p in start[k]..start[k + 1] {
            let i = index[p];
            t_index[next[i]] = k;
            t_value[next[i]] = value[p];
            next[i] += 1;
        }
    }
    (counts, t_index, t_value)
}
