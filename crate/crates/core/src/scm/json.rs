//! JSON documents describing a model by node name. Node order in the document
//! fixes node indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CausalDag, Composition, Monomial, NodeSpec, NoiseSpec, ProductInput, Scm, StructuralFunction, TabularGrid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScmDoc {
    pub nodes: Vec<NodeDoc>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub name: String,
    pub noise: NoiseSpec,
    pub equation: EquationDoc,
    #[serde(default)]
    pub composition: CompositionDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionDoc {
    #[default]
    Additive,
    Embedded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputDoc {
    Parent(String),
    Noise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialDoc {
    pub coef: f64,
    #[serde(default)]
    pub powers: BTreeMap<String, i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum EquationDoc {
    Constant {
        value: f64,
    },
    Linear {
        weights: BTreeMap<String, f64>,
        #[serde(default)]
        offset: f64,
    },
    Polynomial {
        terms: Vec<MonomialDoc>,
    },
    Product {
        left: InputDoc,
        right: InputDoc,
    },
    Tabular {
        parents: Vec<String>,
        lo: Vec<f64>,
        step: Vec<f64>,
        counts: Vec<usize>,
        values: Vec<f64>,
    },
}

impl ScmDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolves names to indices. Structural defects (cycles, undeclared
    /// parents) are not errors here; they show up in [`Scm::violations`].
    pub fn to_scm(&self) -> Result<Scm> {
        let names: Vec<&str> = self.nodes.iter().map(|n| n.name.as_str()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Scenario(format!("duplicate node name `{n}`")));
            }
        }
        let idx = |name: &str| -> Result<usize> {
            names.iter().position(|n| *n == name).ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        let edges = self
            .edges
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let dag = CausalDag::new(names.iter().copied(), edges);
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let equation = match &n.equation {
                    EquationDoc::Constant { value } => StructuralFunction::Constant(*value),
                    EquationDoc::Linear { weights, offset } => StructuralFunction::linear(
                        weights.iter().map(|(k, w)| Ok((idx(k)?, *w))).collect::<Result<Vec<_>>>()?,
                        *offset,
                    ),
                    EquationDoc::Polynomial { terms } => StructuralFunction::Polynomial(
                        terms
                            .iter()
                            .map(|t| {
                                let mut powers = t
                                    .powers
                                    .iter()
                                    .map(|(k, p)| Ok((idx(k)?, *p)))
                                    .collect::<Result<Vec<_>>>()?;
                                powers.sort_by_key(|&(i, _)| i);
                                Ok(Monomial { coef: t.coef, powers })
                            })
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    EquationDoc::Product { left, right } => {
                        let conv = |i: &InputDoc| -> Result<ProductInput> {
                            Ok(match i {
                                InputDoc::Parent(p) => ProductInput::Parent(idx(p)?),
                                InputDoc::Noise => ProductInput::Noise,
                            })
                        };
                        StructuralFunction::Product(conv(left)?, conv(right)?)
                    }
                    EquationDoc::Tabular { parents, lo, step, counts, values } => {
                        StructuralFunction::Tabular(TabularGrid {
                            parents: parents.iter().map(|p| idx(p)).collect::<Result<Vec<_>>>()?,
                            lo: lo.clone(),
                            step: step.clone(),
                            counts: counts.clone(),
                            values: values.clone(),
                        })
                    }
                };
                let composition = match n.composition {
                    CompositionDoc::Additive => Composition::Additive,
                    CompositionDoc::Embedded => Composition::Embedded,
                };
                Ok(NodeSpec { equation, noise: n.noise, composition })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Scm::new(dag, nodes, self.support_bound))
    }

    pub fn from_scm(scm: &Scm) -> Self {
        let name = |i: usize| scm.name(i).to_string();
        let nodes = (0..scm.len())
            .map(|i| {
                let spec = scm.node(i);
                let equation = match &spec.equation {
                    StructuralFunction::Constant(k) => EquationDoc::Constant { value: *k },
                    StructuralFunction::Linear { weights, offset } => EquationDoc::Linear {
                        weights: weights.iter().map(|&(p, w)| (name(p), w)).collect(),
                        offset: *offset,
                    },
                    StructuralFunction::Polynomial(terms) => EquationDoc::Polynomial {
                        terms: terms
                            .iter()
                            .map(|t| MonomialDoc {
                                coef: t.coef,
                                powers: t.powers.iter().map(|&(p, k)| (name(p), k)).collect(),
                            })
                            .collect(),
                    },
                    StructuralFunction::Product(a, b) => {
                        let conv = |i: &ProductInput| match i {
                            ProductInput::Parent(p) => InputDoc::Parent(name(*p)),
                            ProductInput::Noise => InputDoc::Noise,
                        };
                        EquationDoc::Product { left: conv(a), right: conv(b) }
                    }
                    StructuralFunction::Tabular(g) => EquationDoc::Tabular {
                        parents: g.parents.iter().map(|&p| name(p)).collect(),
                        lo: g.lo.clone(),
                        step: g.step.clone(),
                        counts: g.counts.clone(),
                        values: g.values.clone(),
                    },
                };
                NodeDoc {
                    name: name(i),
                    noise: spec.noise,
                    equation,
                    composition: match spec.composition {
                        Composition::Additive => CompositionDoc::Additive,
                        Composition::Embedded => CompositionDoc::Embedded,
                    },
                }
            })
            .collect();
        ScmDoc {
            nodes,
            edges: scm.dag().edges().iter().map(|&(a, b)| (name(a), name(b))).collect(),
            support_bound: Some(scm.support_bound()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scm::{forward_eval, validate, NoiseAssignment, Violation};

    const COUNTEREXAMPLE: &str = r#"{
        "nodes": [
            {"name": "X", "noise": {"law": "gaussian", "mean": 0, "stddev": 1},
             "equation": {"form": "constant", "value": 0}},
            {"name": "Y", "noise": {"law": "rademacher"},
             "equation": {"form": "product", "left": {"parent": "X"}, "right": "noise"},
             "composition": "embedded"}
        ],
        "edges": [["X", "Y"]],
        "support_bound": 6.0
    }"#;

    #[test]
    fn parses_product_model() {
        let scm = ScmDoc::from_json(COUNTEREXAMPLE).unwrap().to_scm().unwrap();
        assert!(validate(&scm).is_empty());
        assert_eq!(scm.support_bound(), 6.0);
        let x = forward_eval(&scm, &NoiseAssignment(vec![2.0, -1.0])).unwrap();
        assert_eq!(x.0, vec![2.0, -2.0]);
    }

    #[test]
    fn unknown_parent_name_is_an_error() {
        let text = COUNTEREXAMPLE.replace(r#"{"parent": "X"}"#, r#"{"parent": "Q"}"#);
        let err = ScmDoc::from_json(&text).unwrap().to_scm().unwrap_err();
        assert!(matches!(err, Error::UnknownNode(n) if n == "Q"));
    }

    #[test]
    fn cycles_survive_parsing_as_violations() {
        let text = r#"{"nodes":[
            {"name":"X","noise":{"law":"rademacher"},"equation":{"form":"linear","weights":{"Y":1}}},
            {"name":"Y","noise":{"law":"rademacher"},"equation":{"form":"linear","weights":{"X":1}}}],
            "edges":[["X","Y"],["Y","X"]], "support_bound": 1}"#;
        let scm = ScmDoc::from_json(text).unwrap().to_scm().unwrap();
        assert_eq!(validate(&scm), vec![Violation::CycleDetected]);
    }

    #[test]
    fn document_round_trip() {
        let scm = ScmDoc::from_json(COUNTEREXAMPLE).unwrap().to_scm().unwrap();
        let doc = ScmDoc::from_scm(&scm);
        let again = doc.to_scm().unwrap();
        assert_eq!(again.nodes(), scm.nodes());
        assert_eq!(again.dag(), scm.dag());
    }
}
