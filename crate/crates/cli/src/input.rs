//! Readers for the components CSV and the pseudo-values list.

use effdof_core::{ComponentSet, VarianceComponent};

use crate::error::CliError;

pub const COMPONENTS_HEADER: [&str; 3] = ["weight", "variance", "dof"];

/// Parses a `weight,variance,dof` CSV document.
///
/// Invalid rows are parse errors carrying the 1-based line and column. A
/// well-formed file whose weighted variances all vanish is a
/// [`CliError::Degenerate`].
pub fn parse_components(text: &str) -> Result<ComponentSet, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| CliError::parse(1, 1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != COMPONENTS_HEADER {
        return Err(CliError::parse(
            1,
            1,
            format!(
                "expected header `{}`, found `{}`",
                COMPONENTS_HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut components = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::parse(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(CliError::parse(
                line,
                1,
                format!("expected 3 fields, found {}", record.len()),
            ));
        }
        let mut values = [0.0; 3];
        for (i, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                CliError::parse(
                    line,
                    i + 1,
                    format!("`{field}` is not a number ({})", COMPONENTS_HEADER[i]),
                )
            })?;
            if !v.is_finite() {
                return Err(CliError::parse(
                    line,
                    i + 1,
                    format!("`{field}` is not finite"),
                ));
            }
            values[i] = v;
        }
        let [w, s, nu] = values;
        let component = VarianceComponent::new(w, s, nu).map_err(|e| {
            let column = if w < 0.0 {
                1
            } else if s < 0.0 {
                2
            } else {
                3
            };
            CliError::parse(line, column, e.to_string())
        })?;
        components.push(component);
    }

    if components.is_empty() {
        return Err(CliError::parse(2, 1, "no component rows after the header"));
    }
    Ok(ComponentSet::new(components)?)
}

/// One real per line; blank lines and `#` comments are skipped.
pub fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::parse(i as u64 + 1, 1, format!("`{line}` is not a number")))?;
        if !v.is_finite() {
            return Err(CliError::parse(
                i as u64 + 1,
                1,
                format!("`{line}` is not finite"),
            ));
        }
        values.push(v);
    }
    Ok(values)
}
