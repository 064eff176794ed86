//! JSON form of a presentation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{rv_spec, Presentation, PresentationKind, Scope};
use crate::multigraph::Slot;
use crate::ncalg::{format_generator, format_poly, parse_generator, parse_poly, Family, RuleSet, TextError};
use crate::scalar::Coefficient;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("invalid presentation: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSum {
    pub family: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub kind: PresentationKind,
    pub scope: Scope,
    pub vertices: Vec<String>,
    pub max_multiplicity: u32,
    pub slots: Vec<(String, u32)>,
    pub edge_slots: Vec<((String, u32), (String, u32))>,
    pub rv: bool,
    pub generators: Vec<String>,
    pub vanishing_pairs: Vec<(String, String)>,
    pub unit_sums: Vec<UnitSum>,
    pub linear_relations: Vec<String>,
    pub substitutions: Vec<(String, String)>,
}

fn slot_pair(names: &[String], s: Slot) -> (String, u32) {
    (names[s.v()].clone(), s.label)
}

fn slot_from(names: &[String], (v, l): &(String, u32)) -> Result<Slot, ExportError> {
    let idx = names
        .iter()
        .position(|n| n == v)
        .ok_or_else(|| ExportError::Text(TextError::Vertex(v.clone())))?;
    if *l == 0 {
        return Err(ExportError::Invalid("label 0".into()));
    }
    Ok(Slot::new(idx, *l))
}

impl<C: Coefficient> Presentation<C> {
    pub fn to_json_value(&self) -> PresentationJson {
        let names = &self.names;
        let fmt = |g| format_generator(g, names);
        let mut unit_sums = Vec::new();
        for &s in self.slots() {
            for (tag, fam) in [("row", Family::Row(s)), ("col", Family::Col(s))] {
                unit_sums.push(UnitSum {
                    family: format!("{tag} {},{}", names[s.v()], s.label),
                    members: self.rules.family_members(fam).map(fmt).collect(),
                });
            }
        }
        PresentationJson {
            kind: self.kind,
            scope: self.scope,
            vertices: names.clone(),
            max_multiplicity: self.n_max,
            slots: self.slots().iter().map(|&s| slot_pair(names, s)).collect(),
            edge_slots: self
                .edge_slots
                .iter()
                .map(|&(a, b)| (slot_pair(names, a), slot_pair(names, b)))
                .collect(),
            rv: self.has_rv(),
            generators: self.generators().into_iter().map(fmt).collect(),
            vanishing_pairs: self
                .rules
                .vanishing_pairs()
                .into_iter()
                .map(|(a, b)| (fmt(a), fmt(b)))
                .collect(),
            unit_sums,
            linear_relations: self.linear.iter().map(|p| format_poly(p, names)).collect(),
            substitutions: self
                .substitutions
                .iter()
                .map(|&(q, u)| (fmt(q), u.map_or_else(|| "0".to_string(), fmt)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("presentation serializes")
    }

    pub fn from_json_value(j: &PresentationJson) -> Result<Self, ExportError> {
        let names = &j.vertices;
        let slots = j
            .slots
            .iter()
            .map(|s| slot_from(names, s))
            .collect::<Result<Vec<_>, _>>()?;
        let edge_slots = j
            .edge_slots
            .iter()
            .map(|(a, b)| Ok((slot_from(names, a)?, slot_from(names, b)?)))
            .collect::<Result<Vec<_>, ExportError>>()?;
        let pairs = j
            .vanishing_pairs
            .iter()
            .map(|(a, b)| Ok((parse_generator(a, names)?, parse_generator(b, names)?)))
            .collect::<Result<Vec<_>, ExportError>>()?;
        let mut rules = RuleSet::new(slots.clone(), pairs).with_partners(edge_slots.iter().copied());
        if j.rv {
            rules = rules.with_rv(rv_spec(names.len(), &slots));
        }
        let expected: Vec<String> = rules.generators().into_iter().map(|g| format_generator(g, names)).collect();
        if expected != j.generators {
            return Err(ExportError::Invalid("generator list does not match the index set".into()));
        }
        rules.derive_zero_lemmas();
        let linear = j
            .linear_relations
            .iter()
            .map(|s| parse_poly(s, names))
            .collect::<Result<Vec<_>, _>>()?;
        let substitutions = j
            .substitutions
            .iter()
            .map(|(q, u)| {
                let image = if u == "0" { None } else { Some(parse_generator(u, names)?) };
                Ok((parse_generator(q, names)?, image))
            })
            .collect::<Result<Vec<_>, ExportError>>()?;
        Ok(Presentation {
            kind: j.kind,
            scope: j.scope,
            names: names.clone(),
            n_max: j.max_multiplicity,
            edge_slots,
            rules,
            linear,
            substitutions,
        })
    }

    pub fn from_json(s: &str) -> Result<Self, ExportError> {
        Self::from_json_value(&serde_json::from_str(s)?)
    }
}
