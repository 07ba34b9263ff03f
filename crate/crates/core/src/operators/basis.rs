use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// Quadrature of a probe light mode.
    Optical,
    /// Position or momentum of the mechanical element.
    Mechanical,
    /// Vacuum quadrature entering through a loss port.
    Ancilla,
}

impl OperatorKind {
    /// Optical and ancilla operators both contribute measurement-induced noise.
    pub fn is_light(self) -> bool {
        matches!(self, OperatorKind::Optical | OperatorKind::Ancilla)
    }
}

/// Ordered operator labels grouped into canonical pairs `(q, p)` with `[q, p] = i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorBasis {
    labels: Vec<String>,
    kinds: Vec<OperatorKind>,
    /// Partner index for each operator and whether it is the `q` member of its pair.
    partner: Vec<(usize, bool)>,
}

impl OperatorBasis {
    /// Builds a basis from canonical pairs; labels are laid out `q0, p0, q1, p1, ...`.
    pub fn from_pairs(pairs: &[(&str, &str, OperatorKind)]) -> Result<Self> {
        let mut labels = Vec::with_capacity(2 * pairs.len());
        let mut kinds = Vec::with_capacity(2 * pairs.len());
        let mut partner = Vec::with_capacity(2 * pairs.len());
        for (k, (q, p, kind)) in pairs.iter().enumerate() {
            for label in [q, p] {
                if labels.iter().any(|l: &String| l == label) {
                    return Err(Error::BasisMismatch(format!("duplicate label `{label}`")));
                }
                labels.push(label.to_string());
                kinds.push(*kind);
            }
            partner.push((2 * k + 1, true));
            partner.push((2 * k, false));
        }
        Ok(Self { labels, kinds, partner })
    }

    /// `(X, Y, x0, p0)`.
    pub fn single_mode() -> Arc<Self> {
        Arc::new(
            Self::from_pairs(&[
                ("X", "Y", OperatorKind::Optical),
                ("x0", "p0", OperatorKind::Mechanical),
            ])
            .expect("static basis"),
        )
    }

    /// `(X, Y, x0, p0, Xa, Ya)`, where `Xa, Ya` is the vacuum admitted at the detection loss.
    pub fn single_mode_lossy() -> Arc<Self> {
        Arc::new(
            Self::from_pairs(&[
                ("X", "Y", OperatorKind::Optical),
                ("x0", "p0", OperatorKind::Mechanical),
                ("Xa", "Ya", OperatorKind::Ancilla),
            ])
            .expect("static basis"),
        )
    }

    /// `(X1, Y1, X2, Y2, x0, p0)`.
    pub fn two_mode() -> Arc<Self> {
        Arc::new(
            Self::from_pairs(&[
                ("X1", "Y1", OperatorKind::Optical),
                ("X2", "Y2", OperatorKind::Optical),
                ("x0", "p0", OperatorKind::Mechanical),
            ])
            .expect("static basis"),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn kind(&self, i: usize) -> OperatorKind {
        self.kinds[i]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Symplectic form: `[O_i, O_j] = i * omega(i, j)`.
    pub fn omega(&self, i: usize, j: usize) -> f64 {
        let (partner, is_q) = self.partner[i];
        if partner != j {
            0.0
        } else if is_q {
            1.0
        } else {
            -1.0
        }
    }
}
