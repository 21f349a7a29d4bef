//! Serializable forms of algebras, elements and channels.
//!
//! Complex entries are `[re, im]` pairs and matrices are lists of rows.

use std::sync::Arc;

use petz_core::{CMatrix, Channel, Element, TracialAlgebra, C64};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

pub type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub block_dims: Vec<usize>,
    pub trace_weights: Vec<f64>,
}

impl AlgebraSpec {
    pub fn of(algebra: &TracialAlgebra) -> Self {
        Self {
            block_dims: algebra.block_dims().to_vec(),
            trace_weights: algebra.trace_weights().to_vec(),
        }
    }

    pub fn build(&self) -> Result<Arc<TracialAlgebra>, HarnessError> {
        Ok(Arc::new(TracialAlgebra::new(
            self.block_dims.clone(),
            self.trace_weights.clone(),
        )?))
    }

    /// Short label such as `M2` or `M1+M1+M2[0.1,0.3,0.3]`.
    pub fn label(&self) -> String {
        let dims: Vec<String> = self.block_dims.iter().map(|n| format!("M{n}")).collect();
        if self.block_dims.len() == 1 {
            dims[0].clone()
        } else {
            let weights: Vec<String> = self.trace_weights.iter().map(|w| format!("{w}")).collect();
            format!("{}[{}]", dims.join("+"), weights.join(","))
        }
    }
}

pub fn matrix_to_data(m: &CMatrix) -> MatrixData {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_data(data: &MatrixData) -> Result<CMatrix, HarnessError> {
    let rows = data.len();
    let cols = data.first().map_or(0, |r| r.len());
    if data.iter().any(|r| r.len() != cols) {
        return Err(HarnessError::Malformed("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(rows, cols, |r, c| C64::new(data[r][c][0], data[r][c][1])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementData {
    pub blocks: Vec<MatrixData>,
}

impl ElementData {
    pub fn of(x: &Element) -> Self {
        Self {
            blocks: x.blocks().iter().map(matrix_to_data).collect(),
        }
    }

    pub fn build(&self, algebra: &Arc<TracialAlgebra>) -> Result<Element, HarnessError> {
        let blocks = self
            .blocks
            .iter()
            .map(matrix_from_data)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Element::from_blocks(algebra, blocks)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelData {
    pub source: AlgebraSpec,
    pub target: AlgebraSpec,
    pub kraus: Vec<MatrixData>,
}

impl ChannelData {
    pub fn of(channel: &Channel) -> Self {
        Self {
            source: AlgebraSpec::of(channel.source()),
            target: AlgebraSpec::of(channel.target()),
            kraus: channel.kraus().iter().map(matrix_to_data).collect(),
        }
    }

    pub fn build(&self) -> Result<Channel, HarnessError> {
        let source = self.source.build()?;
        let target = self.target.build()?;
        let kraus = self
            .kraus
            .iter()
            .map(matrix_from_data)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Channel::from_kraus(&source, &target, kraus)?)
    }
}
