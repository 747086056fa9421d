use num_complex::Complex64;

use super::operator::{CMatrix, DensityMatrix, Operator};
use crate::error::{Error, Result};

/// Ordered tensor factors of a composite Hilbert space. Slot 0 is the leftmost
/// factor and composite indices are row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemLayout {
    pub fn new<S: Into<String>>(dims: Vec<usize>, labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if dims.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: dims.len(), found: labels.len() });
        }
        if dims.len() < 2 {
            return Err(Error::InvalidArgument("a layout needs at least two subsystems".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument("subsystem dimensions must be positive".into()));
        }
        for (k, label) in labels.iter().enumerate() {
            if labels[..k].contains(label) {
                return Err(Error::InvalidArgument(format!("duplicate label `{label}`")));
            }
        }
        Ok(SubsystemLayout { dims, labels })
    }

    /// Two-slot layout `A (x) B`.
    pub fn pair(dim_a: usize, dim_b: usize) -> Self {
        SubsystemLayout::new(vec![dim_a, dim_b], vec!["A", "B"]).expect("valid pair layout")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.index_of(label)?])
    }

    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in self.dims.iter().enumerate().rev() {
            out[slot] = index % d;
            index /= d;
        }
        out
    }

    fn check_state(&self, dim: usize) -> Result<()> {
        if dim != self.total_dim() {
            return Err(Error::DimensionMismatch { expected: self.total_dim(), found: dim });
        }
        Ok(())
    }
}

/// Acts with `op` on the named slots (in the given order) and as the identity elsewhere.
pub fn tensor_embed(op: &Operator, layout: &SubsystemLayout, slots: &[&str]) -> Result<Operator> {
    let ranges: Vec<Vec<usize>> = slots
        .iter()
        .map(|s| layout.dim_of(s).map(|d| (0..d).collect()))
        .collect::<Result<_>>()?;
    let levels: Vec<&[usize]> = ranges.iter().map(Vec::as_slice).collect();
    embed_levels(op, layout, slots, &levels)
}

/// Like [`tensor_embed`], but `op` lives on a subspace of each named slot spanned by
/// the listed levels; matrix elements involving other levels of those slots vanish.
pub fn embed_levels(
    op: &Operator,
    layout: &SubsystemLayout,
    slots: &[&str],
    levels: &[&[usize]],
) -> Result<Operator> {
    if slots.is_empty() || slots.len() != levels.len() {
        return Err(Error::InvalidArgument("one level list is required per slot".into()));
    }
    let mut slot_idx = Vec::with_capacity(slots.len());
    for s in slots {
        let k = layout.index_of(s)?;
        if slot_idx.contains(&k) {
            return Err(Error::InvalidArgument(format!("slot `{s}` named twice")));
        }
        slot_idx.push(k);
    }
    // position[m][level] = index of `level` inside the m-th local factor of `op`.
    let mut position: Vec<Vec<Option<usize>>> = Vec::with_capacity(slots.len());
    for (m, lv) in levels.iter().enumerate() {
        let d = layout.dims[slot_idx[m]];
        let mut map = vec![None; d];
        for (p, &l) in lv.iter().enumerate() {
            if l >= d || map[l].is_some() {
                return Err(Error::InvalidArgument(format!("invalid level list for slot `{}`", slots[m])));
            }
            map[l] = Some(p);
        }
        position.push(map);
    }
    let local_dim: usize = levels.iter().map(|l| l.len()).product();
    if op.dim() != local_dim {
        return Err(Error::DimensionMismatch { expected: local_dim, found: op.dim() });
    }

    let n = layout.total_dim();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| layout.digits(i)).collect();
    let local = |d: &[usize]| -> Option<usize> {
        let mut idx = 0;
        for (m, &slot) in slot_idx.iter().enumerate() {
            idx = idx * levels[m].len() + position[m][d[slot]]?;
        }
        Some(idx)
    };
    let locals: Vec<Option<usize>> = digits.iter().map(|d| local(d)).collect();
    let matrix = CMatrix::from_fn(n, n, |r, col| {
        let (Some(lr), Some(lc)) = (locals[r], locals[col]) else {
            return Complex64::new(0.0, 0.0);
        };
        let rest_equal = (0..layout.len())
            .filter(|s| !slot_idx.contains(s))
            .all(|s| digits[r][s] == digits[col][s]);
        if rest_equal {
            op.matrix()[(lr, lc)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let embedded = Operator::new(matrix)?;
    debug_assert_eq!(embedded.is_hermitian(), op.is_hermitian());
    Ok(embedded)
}

/// Reduced state on the kept slots, ordered as in the layout.
pub fn partial_trace(rho: &DensityMatrix, layout: &SubsystemLayout, keep: &[&str]) -> Result<DensityMatrix> {
    layout.check_state(rho.dim())?;
    if keep.is_empty() {
        return Err(Error::InvalidArgument("partial trace needs at least one kept slot".into()));
    }
    let mut kept = Vec::with_capacity(keep.len());
    for s in keep {
        let k = layout.index_of(s)?;
        if !kept.contains(&k) {
            kept.push(k);
        }
    }
    kept.sort_unstable();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| layout.dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let n = layout.total_dim();
    let split = |i: usize| -> (usize, usize) {
        let d = layout.digits(i);
        let (mut a, mut b) = (0, 0);
        for (s, &digit) in d.iter().enumerate() {
            if kept.contains(&s) {
                a = a * layout.dims[s] + digit;
            } else {
                b = b * layout.dims[s] + digit;
            }
        }
        (a, b)
    };
    let parts: Vec<(usize, usize)> = (0..n).map(split).collect();
    let mut out = CMatrix::zeros(dk, dk);
    let m = rho.matrix();
    for r in 0..n {
        for col in 0..n {
            if parts[r].1 == parts[col].1 {
                out[(parts[r].0, parts[col].0)] += m[(r, col)];
            }
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// All single-slot marginals, in layout order.
pub fn marginals(rho: &DensityMatrix, layout: &SubsystemLayout) -> Result<Vec<DensityMatrix>> {
    layout.labels().iter().map(|l| partial_trace(rho, layout, &[l.as_str()])).collect()
}

/// Tensor product of per-slot states in layout order.
pub fn product_state(states: &[DensityMatrix]) -> Result<DensityMatrix> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, s| acc.kron(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::pauli;
    use crate::quantum::operator::max_abs;

    #[test]
    fn embed_pads_with_identity() {
        let [_, _, z] = pauli();
        let layout = SubsystemLayout::pair(2, 2);
        let e = tensor_embed(&z, &layout, &["A"]).unwrap();
        let expected = z.kron(&Operator::identity(2));
        assert!(max_abs(&(e.matrix() - expected.matrix())) < 1e-15);
        let id = tensor_embed(&Operator::identity(2), &layout, &["B"]).unwrap();
        assert!(max_abs(&(id.matrix() - CMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn embed_reversed_slots_permutes() {
        let [x, _, z] = pauli();
        let layout = SubsystemLayout::pair(2, 2);
        let op = x.kron(&z);
        let e = tensor_embed(&op, &layout, &["B", "A"]).unwrap();
        let expected = z.kron(&x);
        assert!(max_abs(&(e.matrix() - expected.matrix())) < 1e-15);
    }

    #[test]
    fn embed_errors() {
        let layout = SubsystemLayout::pair(2, 3);
        let [x, _, _] = pauli();
        assert!(matches!(tensor_embed(&x, &layout, &["C"]), Err(Error::UnknownLabel(_))));
        assert!(matches!(tensor_embed(&x, &layout, &["B"]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let a = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::diagonal(&[0.2, 0.5, 0.3]).unwrap();
        let layout = SubsystemLayout::pair(2, 3);
        let ab = a.kron(&b);
        let ra = partial_trace(&ab, &layout, &["A"]).unwrap();
        let rb = partial_trace(&ab, &layout, &["B"]).unwrap();
        assert!(max_abs(&(ra.matrix() - a.matrix())) < 1e-15);
        assert!(max_abs(&(rb.matrix() - b.matrix())) < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = Complex64::new(0.0, 0.0);
        let bell = DensityMatrix::pure(&[Complex64::new(s, 0.0), zero, zero, Complex64::new(s, 0.0)]).unwrap();
        let r = partial_trace(&bell, &SubsystemLayout::pair(2, 2), &["A"]).unwrap();
        assert!(max_abs(&(r.matrix() - DensityMatrix::maximally_mixed(2).matrix())) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let layout = SubsystemLayout::pair(2, 2);
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(partial_trace(&rho, &layout, &[]).is_err());
        assert!(matches!(partial_trace(&rho, &layout, &["Z"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn layout_validation() {
        assert!(SubsystemLayout::new(vec![2], vec!["A"]).is_err());
        assert!(SubsystemLayout::new(vec![2, 2], vec!["A", "A"]).is_err());
        assert!(SubsystemLayout::new(vec![2, 0], vec!["A", "B"]).is_err());
    }
}
