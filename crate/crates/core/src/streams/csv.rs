use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::StreamSource;
use crate::error::{Error, Result};
use crate::schema::{Attribute, Instance, Schema};

/// One column of a CSV file, in file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CsvAttribute {
    Numeric { name: String },
    Nominal { name: String, values: Vec<String> },
}

/// Sidecar description of a CSV file: attribute columns followed by a class
/// column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub attributes: Vec<CsvAttribute>,
    pub classes: Vec<String>,
    #[serde(default)]
    pub has_header: bool,
}

impl CsvSchema {
    pub fn to_schema(&self) -> Result<Schema> {
        let attributes = self
            .attributes
            .iter()
            .map(|a| match a {
                CsvAttribute::Numeric { name } => Attribute::numeric(name),
                CsvAttribute::Nominal { name, values } => Attribute::nominal(name, values.len()),
            })
            .collect();
        Schema::new(attributes, self.classes.clone())
    }
}

/// Instances read from a comma-separated file, class label in the last
/// column. The whole file is parsed and validated on open.
#[derive(Debug, Clone)]
pub struct CsvStream {
    schema: Schema,
    instances: std::vec::IntoIter<Instance>,
    len: u64,
}

impl CsvStream {
    pub fn open(path: impl AsRef<Path>, spec: &CsvSchema) -> Result<Self> {
        let path = path.as_ref();
        let schema = spec.to_schema()?;
        let io_error = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = std::fs::File::open(path).map_err(io_error)?;
        let mut reader = ::csv::ReaderBuilder::new()
            .has_headers(spec.has_header)
            .flexible(true)
            .trim(::csv::Trim::All)
            .from_reader(file);

        let lookups: Vec<Option<HashMap<&str, usize>>> = spec
            .attributes
            .iter()
            .map(|a| match a {
                CsvAttribute::Numeric { .. } => None,
                CsvAttribute::Nominal { values, .. } => Some(
                    values
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (v.as_str(), i))
                        .collect(),
                ),
            })
            .collect();
        let classes: HashMap<&str, usize> = spec
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let columns = spec.attributes.len() + 1;

        let mut instances = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                parse_error(
                    path,
                    e.position().map_or(0, |p| p.line()),
                    None,
                    e.to_string(),
                )
            })?;
            let row = record.position().map_or(0, |p| p.line());
            if record.len() != columns {
                return Err(parse_error(
                    path,
                    row,
                    None,
                    format!("expected {columns} columns, found {}", record.len()),
                ));
            }
            let mut values = Vec::with_capacity(columns - 1);
            for (column, (field, lookup)) in record.iter().zip(&lookups).enumerate() {
                let value = match lookup {
                    Some(map) => *map.get(field).ok_or_else(|| {
                        parse_error(
                            path,
                            row,
                            Some(column + 1),
                            format!(
                                "value `{field}` is not declared for attribute `{}`",
                                schema.attribute(column).name
                            ),
                        )
                    })? as f64,
                    None => field
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| {
                            parse_error(
                                path,
                                row,
                                Some(column + 1),
                                format!("`{field}` is not a finite number"),
                            )
                        })?,
                };
                values.push(value);
            }
            let class_field = &record[columns - 1];
            let label = *classes.get(class_field).ok_or_else(|| {
                parse_error(
                    path,
                    row,
                    Some(columns),
                    format!("class `{class_field}` is not declared"),
                )
            })?;
            instances.push(Instance::labeled(values, label));
        }
        let len = instances.len() as u64;
        Ok(CsvStream {
            schema,
            instances: instances.into_iter(),
            len,
        })
    }
}

fn parse_error(path: &Path, row: u64, column: Option<usize>, message: String) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        row,
        column,
        message,
    }
}

impl Iterator for CsvStream {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        self.instances.next()
    }
}

impl StreamSource for CsvStream {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn declared_len(&self) -> Option<u64> {
        Some(self.len)
    }
}
