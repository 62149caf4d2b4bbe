//! Instance generators that encode Orthogonal Vectors and Convolution 3SUM
//! as Hausdorff-under-translation decision problems.

pub mod conv3sum;
pub mod ov;

use serde::Serialize;

use crate::geometry::{Norm, PointSet};
use crate::scalar::{format_rational, Rational};

/// Role of a point inside the four-part Conv3SUM construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LowLevelRole {
    Number1(usize),
    Number2(usize),
    Filling(usize),
    R1,
    R2,
    /// Extra filling point of the padded diagonal gadget.
    Padding(usize),
}

/// Which gadget emitted a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GadgetTag {
    VectorGadgetLeft(usize),
    VectorGadgetRightDummy(usize),
    VectorGadgetB(usize),
    TranslationGadget,
    UndirectedGadget,
    Column(LowLevelRole),
    Row(LowLevelRole),
    Diagonal(LowLevelRole),
    TranslationAnchor,
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub a: PointSet,
    pub b: PointSet,
    pub delta: Rational,
    pub norm: Norm,
    pub provenance_a: Vec<GadgetTag>,
    pub provenance_b: Vec<GadgetTag>,
    pub preprocessing_note: Option<String>,
}

#[derive(Serialize)]
struct ProvenanceEntry<'a> {
    set: &'static str,
    index: usize,
    gadget: &'a GadgetTag,
    x: String,
    y: String,
}

#[derive(Serialize)]
struct ProvenanceDoc<'a> {
    norm: String,
    delta: String,
    preprocessing_note: Option<&'a str>,
    points: Vec<ProvenanceEntry<'a>>,
}

impl ReductionOutput {
    pub fn instance(&self) -> crate::format::Instance {
        crate::format::Instance::new(self.a.clone(), self.b.clone(), self.norm, Some(self.delta.clone()))
    }

    /// Per-point gadget map as pretty-printed JSON.
    pub fn provenance_json(&self) -> String {
        let mut points = Vec::with_capacity(self.a.len() + self.b.len());
        for (set, ps, tags) in [("A", &self.a, &self.provenance_a), ("B", &self.b, &self.provenance_b)] {
            for (index, (p, gadget)) in ps.iter().zip(tags).enumerate() {
                points.push(ProvenanceEntry { set, index, gadget, x: p.x.to_string(), y: p.y.to_string() });
            }
        }
        let doc = ProvenanceDoc {
            norm: self.norm.to_string(),
            delta: format_rational(&self.delta),
            preprocessing_note: self.preprocessing_note.as_deref(),
            points,
        };
        serde_json::to_string_pretty(&doc).expect("provenance is always serializable")
    }
}
