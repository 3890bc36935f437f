//! Kochen-Specker type sets.
//!
//! An [`OperatorSet`] is a finite set of vectors, projectors or PSD
//! operators in a fixed dimension. Its measurements are the subsets that sum
//! to the identity ([`enumerate_measurements`]); a marking function picks
//! exactly one element of every measurement ([`search_marking`]). The set is
//! KS-type when every marking function is forced to mark a forbidden pair,
//! or when no marking function exists at all ([`classify`]).

mod fixtures;
mod search;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::json::{self, EntryKind, OperatorEntry, OperatorFile};
use crate::linalg::{self, support_basis, CMat, Ket, TolerancePolicy};

pub use fixtures::{fixture_cabello18, fixture_peres24, CABELLO18_BASES};
pub use search::{
    enumerate_measurements, enumerate_measurements_with_cap, orthogonality_table, parity_obstruction, search_marking,
    search_marking_with_stats, validate_marking, MarkingSearch, DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Vectors,
    Projectors,
    Psd,
}

#[derive(Debug, Clone)]
pub struct Element {
    pub label: String,
    pub matrix: CMat,
    /// Present for vector-kind sets; `matrix` is then its rank-1 projector.
    pub ket: Option<Ket>,
}

#[derive(Debug, Clone)]
pub struct OperatorSet {
    dim: usize,
    kind: SetKind,
    elements: Vec<Element>,
    tol: TolerancePolicy,
}

impl OperatorSet {
    pub fn from_kets(dim: usize, kets: Vec<(String, Ket)>, tol: TolerancePolicy) -> Result<Self> {
        let elements = kets
            .into_iter()
            .map(|(label, k)| {
                if k.dim() != dim {
                    return Err(Error::dim(format!("ket '{label}' has dim {}, set dim {dim}", k.dim())));
                }
                Ok(Element {
                    label,
                    matrix: k.projector(),
                    ket: Some(k),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorSet::checked(dim, SetKind::Vectors, elements, tol)
    }

    pub fn from_projectors(dim: usize, ops: Vec<(String, CMat)>, tol: TolerancePolicy) -> Result<Self> {
        let elements = ops
            .into_iter()
            .map(|(label, matrix)| Element { label, matrix, ket: None })
            .collect();
        OperatorSet::checked(dim, SetKind::Projectors, elements, tol)
    }

    pub fn from_psd(dim: usize, ops: Vec<(String, CMat)>, tol: TolerancePolicy) -> Result<Self> {
        let elements = ops
            .into_iter()
            .map(|(label, matrix)| Element { label, matrix, ket: None })
            .collect();
        OperatorSet::checked(dim, SetKind::Psd, elements, tol)
    }

    /// Like the constructors, but silently drops elements equal (within
    /// tolerance) to an earlier one instead of rejecting the input.
    pub fn dedup_from(dim: usize, kind: SetKind, elements: Vec<Element>, tol: TolerancePolicy) -> Result<Self> {
        let mut kept: Vec<Element> = Vec::new();
        for e in elements {
            let mut dup = false;
            for k in &kept {
                if linalg::approx_eq(&k.matrix, &e.matrix, &tol)? {
                    dup = true;
                    break;
                }
            }
            if !dup {
                kept.push(e);
            }
        }
        OperatorSet::checked(dim, kind, kept, tol)
    }

    fn checked(dim: usize, kind: SetKind, elements: Vec<Element>, tol: TolerancePolicy) -> Result<Self> {
        if dim == 0 {
            return Err(Error::dim("operator set dimension must be positive"));
        }
        for e in &elements {
            if e.matrix.rows() != dim || e.matrix.cols() != dim {
                return Err(Error::dim(format!(
                    "element '{}' is {}x{}, set dim {dim}",
                    e.label,
                    e.matrix.rows(),
                    e.matrix.cols()
                )));
            }
            if tol.is_zero(e.matrix.max_abs(), "zero element")? {
                return Err(Error::Invalid(format!("element '{}' is the zero operator", e.label)));
            }
            match kind {
                SetKind::Vectors | SetKind::Projectors => {
                    if !linalg::is_projector(&e.matrix, &tol)? {
                        return Err(Error::NotProjector(format!("element '{}'", e.label)));
                    }
                }
                SetKind::Psd => {
                    let defect = e.matrix.hermitian_defect()?;
                    if !tol.is_zero(defect, "psd element hermiticity")? {
                        return Err(Error::NotHermitian(format!("element '{}'", e.label)));
                    }
                    let lo = e.matrix.min_eigenvalue()?;
                    if !tol.is_nonnegative(lo, "psd element minimum eigenvalue")? {
                        return Err(Error::Invalid(format!(
                            "element '{}' has negative eigenvalue {lo}",
                            e.label
                        )));
                    }
                    let hi = e.matrix.max_eigenvalue()?;
                    if !tol.is_nonnegative(1.0 - hi, "psd element maximum eigenvalue")? {
                        return Err(Error::Invalid(format!(
                            "element '{}' is not below the identity (max eigenvalue {hi})",
                            e.label
                        )));
                    }
                }
            }
        }
        for i in 0..elements.len() {
            for j in 0..i {
                if linalg::approx_eq(&elements[i].matrix, &elements[j].matrix, &tol)? {
                    return Err(Error::Invalid(format!(
                        "duplicate elements '{}' and '{}'",
                        elements[j].label, elements[i].label
                    )));
                }
            }
        }
        Ok(OperatorSet {
            dim,
            kind,
            elements,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn matrix(&self, i: usize) -> &CMat {
        &self.elements[i].matrix
    }

    pub fn tolerance(&self) -> &TolerancePolicy {
        &self.tol
    }

    pub fn with_tolerance(mut self, tol: TolerancePolicy) -> Self {
        self.tol = tol;
        self
    }

    /// Index of the element equal to `m` within tolerance, if any.
    pub fn position(&self, m: &CMat) -> Result<Option<usize>> {
        for (i, e) in self.elements.iter().enumerate() {
            if linalg::approx_eq(&e.matrix, m, &self.tol)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Conjugates every element by the unitary `u`: `P -> U P U^dagger`.
    /// Trace inner products and identity decompositions are preserved.
    pub fn rotated(&self, u: &CMat) -> Result<OperatorSet> {
        let d = u.square_dim()?;
        if d != self.dim {
            return Err(Error::dim(format!("unitary of dim {d} for set of dim {}", self.dim)));
        }
        let uu = u.adjoint().matmul(u)?;
        if !linalg::approx_eq(&uu, &CMat::identity(d), &self.tol)? {
            return Err(Error::Invalid("rotation matrix is not unitary".into()));
        }
        let ud = u.adjoint();
        let elements = self
            .elements
            .iter()
            .map(|e| {
                let matrix = u.matmul(&e.matrix)?.matmul(&ud)?;
                let ket = match &e.ket {
                    Some(k) => Some(Ket::normalized(u.mul_vec(k.amps())?)?),
                    None => None,
                };
                Ok(Element {
                    label: e.label.clone(),
                    matrix,
                    ket,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OperatorSet::checked(self.dim, self.kind, elements, self.tol)
    }

    pub fn from_json_str(text: &str, tol: TolerancePolicy) -> Result<Self> {
        let file: OperatorFile = serde_json::from_str(text)?;
        OperatorSet::from_file(&file, tol)
    }

    pub fn from_file(file: &OperatorFile, tol: TolerancePolicy) -> Result<Self> {
        let dim = file.dim;
        if file.operators.is_empty() {
            return Err(Error::Parse("operator file lists no operators".into()));
        }
        let all_kets = file.operators.iter().all(|o| o.kind == EntryKind::Ket);
        let any_psd = file.operators.iter().any(|o| o.kind == EntryKind::Psd);
        let mut elements = Vec::with_capacity(file.operators.len());
        for op in &file.operators {
            let el = match op.kind {
                EntryKind::Ket => {
                    let k = Ket::normalized(json::decode_ket(dim, &op.entries)?)?;
                    Element {
                        label: op.label.clone(),
                        matrix: k.projector(),
                        ket: all_kets.then_some(k),
                    }
                }
                EntryKind::Projector | EntryKind::Psd => Element {
                    label: op.label.clone(),
                    matrix: json::decode_matrix(dim, &op.entries)?,
                    ket: None,
                },
            };
            elements.push(el);
        }
        let kind = if all_kets {
            SetKind::Vectors
        } else if any_psd {
            SetKind::Psd
        } else {
            SetKind::Projectors
        };
        OperatorSet::checked(dim, kind, elements, tol)
    }

    pub fn to_file(&self) -> OperatorFile {
        let operators = self
            .elements
            .iter()
            .map(|e| match (&e.ket, self.kind) {
                (Some(k), SetKind::Vectors) => OperatorEntry {
                    label: e.label.clone(),
                    kind: EntryKind::Ket,
                    entries: json::encode_ket(k),
                },
                (_, SetKind::Psd) => OperatorEntry {
                    label: e.label.clone(),
                    kind: EntryKind::Psd,
                    entries: json::encode_entries(&e.matrix),
                },
                _ => OperatorEntry {
                    label: e.label.clone(),
                    kind: EntryKind::Projector,
                    entries: json::encode_entries(&e.matrix),
                },
            })
            .collect();
        OperatorFile {
            dim: self.dim,
            operators,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }
}

/// All subsets of an operator set that sum to the identity, as index lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementCover {
    pub subsets: Vec<Vec<usize>>,
}

impl MeasurementCover {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// For each element index, the subsets it belongs to.
    pub fn memberships(&self, n_elements: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); n_elements];
        for (i, s) in self.subsets.iter().enumerate() {
            for &e in s {
                out[e].push(i);
            }
        }
        out
    }
}

/// 0/1 values on the elements of an operator set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingAssignment {
    pub values: Vec<u8>,
}

impl MarkingAssignment {
    pub fn marked(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| i)
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.values.get(i) == Some(&1)
    }
}

/// Pairs of elements a marking function must not both mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Forbid {
    None,
    /// `Tr(P P') = 0`
    OrthogonalPair,
    /// `E + E' <= I`
    SubidentityPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    NotKs,
    WeakOrProjectiveKs,
    GeneralizedKs,
}

impl Classification {
    pub fn is_ks(self) -> bool {
        self != Classification::NotKs
    }
}

/// Evidence that the marking search was exhaustive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustionRecord {
    /// Product of the measurement sizes, saturating.
    pub search_space: u64,
    pub nodes_visited: u64,
    pub measurements: usize,
    pub forbid: Forbid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KsCertificate {
    Marking(MarkingAssignment),
    Exhaustion(ExhaustionRecord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KsVerdict {
    pub classification: Classification,
    pub certificate: KsCertificate,
    pub cover: MeasurementCover,
}

impl KsVerdict {
    pub fn exhaustion(&self) -> Option<&ExhaustionRecord> {
        match &self.certificate {
            KsCertificate::Exhaustion(e) => Some(e),
            KsCertificate::Marking(_) => None,
        }
    }

    pub fn marking(&self) -> Option<&MarkingAssignment> {
        match &self.certificate {
            KsCertificate::Marking(m) => Some(m),
            KsCertificate::Exhaustion(_) => None,
        }
    }
}

pub fn forbid_for(kind: SetKind) -> Forbid {
    match kind {
        SetKind::Vectors | SetKind::Projectors => Forbid::OrthogonalPair,
        SetKind::Psd => Forbid::SubidentityPair,
    }
}

/// Classifies against the cover supplied by the caller.
pub fn classify_with_cover(set: &OperatorSet, cover: MeasurementCover) -> Result<KsVerdict> {
    if cover.is_empty() {
        return Err(Error::pre("no measurements; vacuously not KS"));
    }
    let forbid = forbid_for(set.kind());
    let run = search_marking_with_stats(set, &cover, forbid)?;
    let classification;
    let certificate;
    match run.assignment {
        Some(a) => {
            classification = Classification::NotKs;
            certificate = KsCertificate::Marking(a);
        }
        None => {
            classification = match set.kind() {
                SetKind::Psd => Classification::GeneralizedKs,
                _ => Classification::WeakOrProjectiveKs,
            };
            certificate = KsCertificate::Exhaustion(ExhaustionRecord {
                search_space: run.search_space,
                nodes_visited: run.nodes_visited,
                measurements: cover.len(),
                forbid,
            });
        }
    }
    Ok(KsVerdict {
        classification,
        certificate,
        cover,
    })
}

/// Enumerates the measurements of `set` and searches for a marking function
/// that avoids the forbidden pairs for its kind.
pub fn classify(set: &OperatorSet) -> Result<KsVerdict> {
    let cover = enumerate_measurements(set)?;
    classify_with_cover(set, cover)
}

/// Replaces every projector by an orthonormal basis of its range. Requires
/// a projective KS input; the output is a weak KS vector set.
pub fn weak_from_projective(set: &OperatorSet) -> Result<OperatorSet> {
    if set.kind() == SetKind::Psd {
        return Err(Error::NotProjector("weak_from_projective needs projectors".into()));
    }
    let verdict = classify(set)?;
    if !verdict.classification.is_ks() {
        return Err(Error::pre("input is not a projective KS set"));
    }
    weak_from_projective_unchecked(set)
}

/// The support-basis union without the KS precondition check.
pub fn weak_from_projective_unchecked(set: &OperatorSet) -> Result<OperatorSet> {
    let tol = *set.tolerance();
    let mut elements = Vec::new();
    for e in set.elements() {
        let basis = support_basis(&e.matrix, &tol)?;
        let multi = basis.len() > 1;
        for (j, k) in basis.into_iter().enumerate() {
            let label = if multi {
                format!("{}#{j}", e.label)
            } else {
                e.label.clone()
            };
            elements.push(Element {
                label,
                matrix: k.projector(),
                ket: Some(k),
            });
        }
    }
    OperatorSet::dedup_from(set.dim(), SetKind::Vectors, elements, tol)
}

/// `P -> P (x) I_m` for every element.
pub fn lift(set: &OperatorSet, m: usize) -> Result<OperatorSet> {
    if m == 0 {
        return Err(Error::Invalid("lift factor must be at least 1".into()));
    }
    if set.kind() == SetKind::Psd {
        return Err(Error::NotProjector("lift needs projectors".into()));
    }
    if m == 1 {
        return Ok(set.clone());
    }
    let id = CMat::identity(m);
    let ops = set
        .elements()
        .iter()
        .map(|e| (e.label.clone(), e.matrix.kron(&id)))
        .collect();
    OperatorSet::from_projectors(set.dim() * m, ops, *set.tolerance())
}
