//! JSON documents for quivers and subset families.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::catalog;
use crate::family::{Subset, SubsetFamily};
use crate::quiver::{DimensionVector, Quiver};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDocument {
    pub from: String,
    pub to: String,
}

/// `{"vertices": [...], "arrows": [{"from", "to"}], "dims": {vertex: n}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDocument {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<IndexMap<String, u32>>,
}

impl QuiverDocument {
    pub fn from_quiver(quiver: &Quiver, dims: Option<&DimensionVector>) -> Self {
        Self {
            vertices: quiver.vertices().to_vec(),
            arrows: quiver
                .arrows()
                .iter()
                .map(|&(s, t)| ArrowDocument { from: quiver.label(s).into(), to: quiver.label(t).into() })
                .collect(),
            dims: dims.map(|d| quiver.vertices().iter().cloned().zip(d.as_slice().iter().copied()).collect()),
        }
    }

    pub fn quiver(&self) -> Result<Quiver, CliError> {
        Ok(Quiver::new(self.vertices.iter().cloned(), self.arrows.iter().map(|a| (a.from.clone(), a.to.clone())))?)
    }

    pub fn dims(&self, quiver: &Quiver) -> Result<Option<DimensionVector>, CliError> {
        let Some(map) = &self.dims else {
            return Ok(None);
        };
        if let Some(extra) = map.keys().find(|k| quiver.vertex_index(k).is_none()) {
            return Err(CliError::Usage(format!("dims mention unknown vertex `{extra}`")));
        }
        let values = quiver
            .vertices()
            .iter()
            .map(|v| map.get(v).copied().ok_or_else(|| CliError::Usage(format!("dims are missing vertex `{v}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(DimensionVector::new(values)))
    }
}

/// `{"J": {vertex: [..]}, "K": {vertex: [..]}}`; absent `K` entries are empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<IndexMap<String, Vec<u32>>>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<IndexMap<String, Vec<u32>>>,
}

impl FamilyDocument {
    fn family(
        map: &IndexMap<String, Vec<u32>>,
        quiver: &Quiver,
        missing_is_empty: bool,
    ) -> Result<SubsetFamily, CliError> {
        if let Some(extra) = map.keys().find(|k| quiver.vertex_index(k).is_none()) {
            return Err(CliError::Usage(format!("family mentions unknown vertex `{extra}`")));
        }
        let parts = quiver
            .vertices()
            .iter()
            .map(|v| match map.get(v) {
                Some(list) => Ok(Subset::new(list.clone())?),
                None if missing_is_empty => Ok(Subset::empty()),
                None => Err(CliError::Usage(format!("J is missing vertex `{v}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SubsetFamily::new(parts))
    }

    pub fn ambient(&self, quiver: &Quiver) -> Result<Option<SubsetFamily>, CliError> {
        self.ambient.as_ref().map(|m| Self::family(m, quiver, false)).transpose()
    }

    pub fn candidate(&self, quiver: &Quiver) -> Result<Option<SubsetFamily>, CliError> {
        self.candidate.as_ref().map(|m| Self::family(m, quiver, true)).transpose()
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, String), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok((value, text))
}

/// A quiver document from a file, or a built-in quiver by name.
pub fn load_quiver(source: &str) -> Result<QuiverDocument, CliError> {
    let path = Path::new(source);
    if path.exists() {
        return read_json::<QuiverDocument>(path).map(|(doc, _)| doc);
    }
    catalog::by_name(source)
        .map(|q| QuiverDocument::from_quiver(&q, None))
        .ok_or_else(|| CliError::Usage(format!("`{source}` is neither a file nor a built-in quiver")))
}

pub fn load_family(path: &Path) -> Result<FamilyDocument, CliError> {
    read_json::<FamilyDocument>(path).map(|(doc, _)| doc)
}

pub fn parse_dims(text: &str) -> Result<DimensionVector, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| CliError::Usage(format!("bad dimension `{t}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(DimensionVector::new)
}

pub fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| CliError::Usage(format!("bad arrow index `{t}`: {e}"))))
        .collect()
}
