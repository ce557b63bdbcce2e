//! Concatenation of monochromatic segments.

use std::collections::BTreeSet;

use crate::graph::{ColouredGraph, Colour, Vertex};
use crate::path::PathSeq;
use crate::verify::{verify_path, PathViolation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StitchError {
    #[error("segment {segment}: {violation}")]
    Segment { segment: usize, violation: PathViolation },
    #[error("segment {segment} is labelled {found:?}, not colour {expected}")]
    Label { segment: usize, found: Option<Colour>, expected: Colour },
    #[error("junction ({left},{right}) is not a colour-{colour} edge")]
    Junction { left: Vertex, right: Vertex, colour: Colour },
    #[error("vertex {vertex} appears in two segments")]
    Duplicate { vertex: Vertex },
}

/// Join `segments` in order into one colour-`colour` path.
pub fn stitch<G: ColouredGraph + ?Sized>(g: &G, segments: &[PathSeq], colour: Colour) -> Result<PathSeq, StitchError> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<Vertex> = Vec::new();
    for (k, seg) in segments.iter().enumerate() {
        if seg.len() >= 2 && seg.colour != Some(colour) {
            return Err(StitchError::Label { segment: k, found: seg.colour, expected: colour });
        }
        let as_colour = PathSeq::new(colour, seg.vertices.clone());
        verify_path(g, &as_colour).map_err(|violation| StitchError::Segment { segment: k, violation })?;
        if let (Some(&left), Some(right)) = (out.last(), seg.first()) {
            if g.edge_colour(left, right) != Some(colour) {
                return Err(StitchError::Junction { left, right, colour });
            }
        }
        for &v in &seg.vertices {
            if !seen.insert(v) {
                return Err(StitchError::Duplicate { vertex: v });
            }
            out.push(v);
        }
    }
    Ok(PathSeq::new(colour, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colourings::ColouringSpec;

    fn graph(spec: &str) -> crate::graph::LazyColouredGraph {
        spec.parse::<ColouringSpec>().unwrap().build_lazy().unwrap()
    }

    #[test]
    fn examples() {
        let g = graph("constant:0");
        let p = stitch(&g, &[PathSeq::new(0, vec![0, 1]), PathSeq::new(0, vec![2, 3])], 0).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2, 3]);

        let g = graph("parity");
        let p = stitch(&g, &[PathSeq::new(0, vec![0, 2]), PathSeq::new(0, vec![4, 6])], 0).unwrap();
        assert_eq!(p.vertices, vec![0, 2, 4, 6]);
        let err = stitch(&g, &[PathSeq::new(0, vec![0, 2]), PathSeq::new(0, vec![3, 5])], 0).unwrap_err();
        assert_eq!(err, StitchError::Junction { left: 2, right: 3, colour: 0 });
    }

    #[test]
    fn singletons_and_duplicates() {
        let g = graph("constant:0");
        let p = stitch(&g, &[PathSeq::singleton(4), PathSeq::singleton(1)], 0).unwrap();
        assert_eq!(p, PathSeq::new(0, vec![4, 1]));
        let err = stitch(&g, &[PathSeq::new(0, vec![0, 1]), PathSeq::new(0, vec![2, 1])], 0).unwrap_err();
        assert_eq!(err, StitchError::Duplicate { vertex: 1 });
    }
}
