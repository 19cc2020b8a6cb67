//! Attribute typing for a stream and the labeled observations it yields.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AttributeKind {
    /// Takes one of `arity` values, encoded as indices `0..arity`.
    Nominal {
        arity: usize,
    },
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(flatten)]
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn nominal(name: impl Into<String>, arity: usize) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Nominal { arity },
        }
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self.kind, AttributeKind::Nominal { .. })
    }
}

/// Describes the attributes and classes of a stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    attributes: Vec<Attribute>,
    class_names: Vec<String>,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>, class_names: Vec<String>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::config(
                "attributes",
                "a schema needs at least one attribute",
            ));
        }
        if class_names.len() < 2 {
            return Err(Error::config(
                "class_names",
                "a schema needs at least two classes",
            ));
        }
        let mut seen = HashSet::new();
        for attribute in &attributes {
            if !seen.insert(attribute.name.as_str()) {
                return Err(Error::config(
                    "attributes",
                    format!("duplicate attribute name `{}`", attribute.name),
                ));
            }
            if let AttributeKind::Nominal { arity } = attribute.kind {
                if arity < 2 {
                    return Err(Error::config(
                        "attributes",
                        format!(
                            "nominal attribute `{}` has arity {arity}, need at least 2",
                            attribute.name
                        ),
                    ));
                }
            }
        }
        Ok(Schema {
            attributes,
            class_names,
        })
    }

    /// Schema with classes named `"0"`, `"1"`, ...
    pub fn with_class_count(attributes: Vec<Attribute>, class_count: usize) -> Result<Self> {
        Schema::new(
            attributes,
            (0..class_count).map(|c| c.to_string()).collect(),
        )
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Checks that `instance` is aligned with this schema.
    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if instance.values.len() != self.attributes.len() {
            return Err(Error::contract(format!(
                "instance has {} values, schema has {} attributes",
                instance.values.len(),
                self.attributes.len()
            )));
        }
        for (index, (value, attribute)) in instance.values.iter().zip(&self.attributes).enumerate()
        {
            match attribute.kind {
                AttributeKind::Nominal { arity } => {
                    if value.fract() != 0.0 || *value < 0.0 || *value >= arity as f64 {
                        return Err(Error::contract(format!(
                            "attribute {index} (`{}`): nominal value {value} outside 0..{arity}",
                            attribute.name
                        )));
                    }
                }
                AttributeKind::Numeric => {
                    if !value.is_finite() {
                        return Err(Error::contract(format!(
                            "attribute {index} (`{}`): non-finite numeric value",
                            attribute.name
                        )));
                    }
                }
            }
        }
        if let Some(label) = instance.label {
            if label >= self.class_count() {
                return Err(Error::contract(format!(
                    "label {label} outside 0..{}",
                    self.class_count()
                )));
            }
        }
        if !(instance.weight > 0.0) || !instance.weight.is_finite() {
            return Err(Error::contract(format!(
                "instance weight {} must be positive",
                instance.weight
            )));
        }
        Ok(())
    }
}

/// One observation. Nominal values are stored as their index.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub values: Vec<f64>,
    pub label: Option<usize>,
    pub weight: f64,
}

impl Instance {
    pub fn labeled(values: Vec<f64>, label: usize) -> Self {
        Instance {
            values,
            label: Some(label),
            weight: 1.0,
        }
    }

    pub fn unlabeled(values: Vec<f64>) -> Self {
        Instance {
            values,
            label: None,
            weight: 1.0,
        }
    }

    /// Value of a nominal attribute as an index.
    #[inline]
    pub fn nominal(&self, attribute: usize) -> usize {
        self.values[attribute] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_attr() -> Schema {
        Schema::with_class_count(vec![Attribute::nominal("a", 3), Attribute::numeric("b")], 2)
            .unwrap()
    }

    #[test]
    fn rejects_bad_schemas() {
        assert!(Schema::with_class_count(vec![], 2).is_err());
        assert!(Schema::with_class_count(vec![Attribute::numeric("a")], 1).is_err());
        assert!(Schema::with_class_count(vec![Attribute::nominal("a", 1)], 2).is_err());
        assert!(Schema::with_class_count(
            vec![Attribute::numeric("a"), Attribute::numeric("a")],
            2
        )
        .is_err());
    }

    #[test]
    fn validates_instances() {
        let schema = two_attr();
        assert!(schema
            .validate(&Instance::labeled(vec![2.0, -4.5], 1))
            .is_ok());
        assert!(schema
            .validate(&Instance::labeled(vec![3.0, 0.0], 1))
            .is_err());
        assert!(schema
            .validate(&Instance::labeled(vec![0.5, 0.0], 1))
            .is_err());
        assert!(schema.validate(&Instance::labeled(vec![0.0], 1)).is_err());
        assert!(schema
            .validate(&Instance::labeled(vec![0.0, 0.0], 2))
            .is_err());
        assert!(schema
            .validate(&Instance::labeled(vec![0.0, f64::NAN], 0))
            .is_err());
        assert!(schema
            .validate(&Instance::unlabeled(vec![1.0, 0.0]))
            .is_ok());
    }
}
