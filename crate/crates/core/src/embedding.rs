//! Joint-embedding similarity: cosine scoring, ranking and threshold filtering of
//! proposals against a query (audio) embedding.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{CmsfError, Result};

/// A finite, fixed-dimension vector in the joint audio-visual space.
///
/// Serialized as `{"dim": n, "values": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEmbedding", into = "RawEmbedding")]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawEmbedding {
    dim: usize,
    values: Vec<f64>,
}

impl TryFrom<RawEmbedding> for EmbeddingVector {
    type Error = CmsfError;

    fn try_from(raw: RawEmbedding) -> Result<Self> {
        if raw.dim != raw.values.len() {
            return Err(CmsfError::Shape(format!(
                "embedding declares dim {} but has {} values",
                raw.dim,
                raw.values.len()
            )));
        }
        EmbeddingVector::new(raw.values)
    }
}

impl From<EmbeddingVector> for RawEmbedding {
    fn from(e: EmbeddingVector) -> Self {
        RawEmbedding {
            dim: e.values.len(),
            values: e.values,
        }
    }
}

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(CmsfError::InvalidValue("embedding has no components".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CmsfError::InvalidValue(format!(
                "embedding component {i} is not finite"
            )));
        }
        Ok(EmbeddingVector { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        EmbeddingVector::new(self.values.iter().map(|v| v * factor).collect())
    }

    /// Euclidean norm, accumulated in ascending index order.
    pub fn norm(&self) -> f64 {
        let mut acc = 0.0f64;
        for v in &self.values {
            acc += v * v;
        }
        acc.sqrt()
    }

    /// Unit-length copy; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(CmsfError::Degenerate("cannot normalize a zero-norm embedding".into()));
        }
        EmbeddingVector::new(self.values.iter().map(|v| v / n).collect())
    }
}

/// A proposal's position in the source list together with its similarity score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScoredProposal {
    pub proposal_index: usize,
    pub similarity: f64,
}

/// `dot(a, b) / (‖a‖ ‖b‖)`, clamped to `[-1, 1]`.
///
/// Sums run in ascending index order with a single `f64` accumulator, which makes
/// the result bitwise symmetric in its arguments.
pub fn cosine_similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(CmsfError::Shape(format!(
            "embedding dims {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(CmsfError::Degenerate("zero-norm embedding".into()));
    }
    let mut dot = 0.0f64;
    for (x, y) in a.values.iter().zip(&b.values) {
        dot += x * y;
    }
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Scores every candidate against `query`, sorted by descending similarity
/// (stable: equal similarities keep input order).
pub fn rank_by_similarity(
    query: &EmbeddingVector,
    candidates: &[EmbeddingVector],
) -> Result<Vec<SimilarityScoredProposal>> {
    let mut scored = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cosine_similarity(c, query)
                .map(|similarity| SimilarityScoredProposal {
                    proposal_index: i,
                    similarity,
                })
                .map_err(|e| CmsfError::Candidate {
                    index: i,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| {
        b.similarity
            .partial_cmp(&a.similarity)
            .unwrap_or(Ordering::Equal)
    });
    Ok(scored)
}

/// Entries whose similarity is strictly above `tau`, order preserved.
pub fn threshold_filter(
    scored: &[SimilarityScoredProposal],
    tau: f64,
) -> Vec<SimilarityScoredProposal> {
    scored.iter().filter(|s| s.similarity > tau).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[f64]) -> EmbeddingVector {
        EmbeddingVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cosine_examples() {
        let a = ev(&[0.3, -1.2, 4.0]);
        assert!((cosine_similarity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine_similarity(&ev(&[1.0, 0.0]), &ev(&[0.0, 1.0])).unwrap(), 0.0);
        let s = cosine_similarity(&ev(&[1.0, 0.0]), &ev(&[1.0, 1.0])).unwrap();
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn cosine_errors() {
        assert!(matches!(
            cosine_similarity(&ev(&[0.0, 0.0]), &ev(&[1.0, 0.0])),
            Err(CmsfError::Degenerate(_))
        ));
        assert!(matches!(
            cosine_similarity(&ev(&[1.0]), &ev(&[1.0, 0.0])),
            Err(CmsfError::Shape(_))
        ));
    }

    #[test]
    fn rank_examples() {
        let q = ev(&[0.2, 0.5, -0.1]);
        assert!(rank_by_similarity(&q, &[]).unwrap().is_empty());
        let neg = q.scaled(-1.0).unwrap();
        let ranked = rank_by_similarity(&q, &[q.clone(), neg]).unwrap();
        assert_eq!(ranked[0].proposal_index, 0);
        assert_eq!(ranked[1].proposal_index, 1);
        assert!((ranked[0].similarity - 1.0).abs() < 1e-12);
        assert!((ranked[1].similarity + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_reports_offending_index() {
        let q = ev(&[1.0, 0.0]);
        let err = rank_by_similarity(&q, &[ev(&[1.0, 1.0]), ev(&[0.0, 0.0])]).unwrap_err();
        assert!(matches!(err, CmsfError::Candidate { index: 1, .. }));
    }

    #[test]
    fn threshold_examples() {
        let s = |i, v| SimilarityScoredProposal {
            proposal_index: i,
            similarity: v,
        };
        let list = vec![s(0, 0.9), s(1, 0.7), s(2, 0.1)];
        assert_eq!(threshold_filter(&list, -1.0), list);
        assert!(threshold_filter(&list, 1.0).is_empty());
        assert_eq!(threshold_filter(&list, 0.7), vec![s(0, 0.9)]);
    }

    #[test]
    fn json_form() {
        let e = ev(&[0.5, -0.25]);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"dim":2,"values":[0.5,-0.25]}"#);
        assert!(serde_json::from_str::<EmbeddingVector>(r#"{"dim":3,"values":[1.0]}"#).is_err());
    }
}
