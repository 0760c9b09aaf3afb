//! JSON input documents for series and surfaces.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use okounkov::polyform::Exponent;
use okounkov::scalar::numer_denom;
use okounkov::surfacezar::SurfaceLattice;
use okounkov::{Form, Rational, Scalar, Series};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub ambient_dim: usize,
    pub divisor_degree: u32,
    #[serde(default)]
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub degree: usize,
    pub forms: Vec<Vec<TermDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exp: Vec<u32>,
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
}

fn one() -> i64 {
    1
}

/// A rational entry: a bare integer or a `{"num", "den"}` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalDoc {
    Integer(i64),
    Pair { num: i64, den: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub negative_curves: Vec<Vec<i64>>,
    pub effective_generators: Vec<Vec<i64>>,
    #[serde(rename = "D")]
    pub d: Vec<RationalDoc>,
    #[serde(rename = "C")]
    pub c: Vec<RationalDoc>,
    /// Curve index (as a string key) to the multiplicity of that curve at the point.
    #[serde(default)]
    pub point_multiplicities: BTreeMap<String, u32>,
}

/// A surface problem ready for the surface engine.
#[derive(Clone, Debug)]
pub struct SurfaceProblem {
    pub lattice: SurfaceLattice,
    pub d: Vec<Rational>,
    pub c: Vec<Rational>,
    pub point_multiplicities: Vec<u32>,
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema { field: field.into(), message: message.into() }
}

fn ratio(num: i64, den: i64, field: &str) -> Result<Rational, CliError> {
    if den == 0 {
        return Err(schema(field, "zero denominator"));
    }
    Ok(Rational::from_ratio(&BigInt::from(num), &BigInt::from(den)).expect("nonzero denominator"))
}

impl RationalDoc {
    fn to_rational(&self, field: &str) -> Result<Rational, CliError> {
        match *self {
            RationalDoc::Integer(n) => Ok(Rational::from_i64(n)),
            RationalDoc::Pair { num, den } => ratio(num, den, field),
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, source: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        source_name: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub(crate) fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

impl SeriesDoc {
    pub fn to_series(&self) -> Result<Series, CliError> {
        let n = self.ambient_dim + 1;
        let mut gens: Vec<(usize, Vec<Form>)> = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(schema(format!("generators[{gi}].degree"), "degree must be at least 1"));
            }
            let expected = g.degree as u32 * self.divisor_degree;
            let mut forms = Vec::new();
            for (fi, terms) in g.forms.iter().enumerate() {
                let field = format!("generators[{gi}].forms[{fi}]");
                let mut degrees = terms.iter().map(|t| t.exp.iter().sum::<u32>());
                if let Some(first) = degrees.next() {
                    if degrees.any(|other| other != first) {
                        return Err(CliError::NonHomogeneous { field });
                    }
                }
                let mut form = Form::zero(n, expected);
                for (ti, term) in terms.iter().enumerate() {
                    let field = format!("{field}[{ti}]");
                    if term.exp.len() != n {
                        return Err(schema(
                            format!("{field}.exp"),
                            format!("expected {n} exponents, found {}", term.exp.len()),
                        ));
                    }
                    let total: u32 = term.exp.iter().sum();
                    if total != expected {
                        return Err(CliError::DegreeMismatch { field: format!("{field}.exp"), found: total, expected });
                    }
                    let c = ratio(term.num, term.den, &format!("{field}.den"))?;
                    let mono = Form::monomial(Exponent::new(term.exp.clone()), c);
                    form.add_scaled(&mono, &Rational::from_i64(1));
                }
                forms.push(form);
            }
            gens.push((g.degree, forms));
        }
        Series::from_generators(self.ambient_dim, self.divisor_degree, gens).map_err(CliError::from)
    }

    /// The document describing `series`, which must carry explicit generators.
    pub fn from_series(series: &Series) -> Result<Self, CliError> {
        let gens = series.generators().ok_or(CliError::Unsupported(
            "only series given by generators can be serialized".to_string(),
        ))?;
        let generators = gens
            .iter()
            .map(|(&degree, forms)| GeneratorDoc {
                degree,
                forms: forms
                    .iter()
                    .map(|f| {
                        f.terms()
                            .map(|(e, c)| {
                                let (num, den) = numer_denom(c);
                                TermDoc {
                                    exp: e.entries().to_vec(),
                                    num: i64::try_from(num).expect("coefficient fits in i64"),
                                    den: i64::try_from(den).expect("coefficient fits in i64"),
                                }
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        Ok(Self { ambient_dim: series.ambient_dim(), divisor_degree: series.divisor_degree(), generators })
    }
}

pub fn parse_series_str(text: &str, source: &str) -> Result<Series, CliError> {
    parse_json::<SeriesDoc>(text, source)?.to_series()
}

pub fn parse_series_file(path: &Path) -> Result<Series, CliError> {
    parse_series_str(&read_input(path)?, &path.display().to_string())
}

pub fn serialize_series(series: &Series) -> Result<String, CliError> {
    let doc = SeriesDoc::from_series(series)?;
    Ok(serde_json::to_string_pretty(&doc).expect("documents serialize"))
}

impl SurfaceDoc {
    pub fn to_problem(&self) -> Result<SurfaceProblem, CliError> {
        let rank = self.rank;
        if self.gram.len() != rank || self.gram.iter().any(|r| r.len() != rank) {
            return Err(schema("gram", format!("expected a {rank}x{rank} matrix")));
        }
        let rows: Vec<&[i64]> = self.gram.iter().map(Vec::as_slice).collect();
        let curves: Vec<&[i64]> = self.negative_curves.iter().map(Vec::as_slice).collect();
        let gens: Vec<&[i64]> = self.effective_generators.iter().map(Vec::as_slice).collect();
        let lattice = SurfaceLattice::from_i64(&rows, &curves, &gens)?;
        let class = |v: &[RationalDoc], name: &str| -> Result<Vec<Rational>, CliError> {
            if v.len() != rank {
                return Err(schema(name, format!("expected {rank} entries, found {}", v.len())));
            }
            v.iter().enumerate().map(|(i, x)| x.to_rational(&format!("{name}[{i}]"))).collect()
        };
        let d = class(&self.d, "D")?;
        let c = class(&self.c, "C")?;
        let mut point_multiplicities = vec![0; self.negative_curves.len()];
        for (key, &m) in &self.point_multiplicities {
            let field = format!("point_multiplicities.{key}");
            let index: usize = key.parse().map_err(|_| schema(&field, "key must be a curve index"))?;
            let slot = point_multiplicities
                .get_mut(index)
                .ok_or_else(|| schema(&field, "no negative curve with this index"))?;
            *slot = m;
        }
        Ok(SurfaceProblem { lattice, d, c, point_multiplicities })
    }
}

pub fn parse_surface_str(text: &str, source: &str) -> Result<SurfaceProblem, CliError> {
    parse_json::<SurfaceDoc>(text, source)?.to_problem()
}

pub fn parse_surface_file(path: &Path) -> Result<SurfaceProblem, CliError> {
    parse_surface_str(&read_input(path)?, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use okounkov::glseries::TruncationBound;

    const PLANE: &str = r#"{"ambient_dim": 2, "divisor_degree": 2, "generators": [{"degree": 1, "forms": [
        [{"exp": [2,0,0], "num": 1}], [{"exp": [0,2,0], "num": 1}], [{"exp": [0,0,2], "num": 1}],
        [{"exp": [1,1,0], "num": 1}], [{"exp": [1,0,1], "num": 1, "den": 1}]]}]}"#;

    #[test]
    fn parses_the_plane_example() {
        let s = parse_series_str(PLANE, "inline").unwrap();
        assert_eq!(s.level(1, TruncationBound::new(1).unwrap()).unwrap().dim(), 5);
    }

    #[test]
    fn empty_generator_list_is_the_zero_series() {
        let s = parse_series_str(r#"{"ambient_dim": 2, "divisor_degree": 1, "generators": []}"#, "inline").unwrap();
        assert_eq!(s.dims(TruncationBound::new(3).unwrap()).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn wrong_degree_is_reported_with_its_field() {
        let text = r#"{"ambient_dim": 2, "divisor_degree": 2, "generators": [{"degree": 1, "forms": [[{"exp": [1,0,0], "num": 1}]]}]}"#;
        let err = parse_series_str(text, "inline").unwrap_err();
        assert_eq!(
            err,
            CliError::DegreeMismatch { field: "generators[0].forms[0][0].exp".into(), found: 1, expected: 2 }
        );
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = parse_series_str("{\n  \"ambient_dim\": 2,\n  \"bogus\": 1\n}", "inline").unwrap_err();
        assert!(matches!(err, CliError::Json { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn round_trip() {
        let s = parse_series_str(PLANE, "inline").unwrap();
        let text = serialize_series(&s).unwrap();
        let again = parse_series_str(&text, "inline").unwrap();
        assert_eq!(serialize_series(&again).unwrap(), text);
    }

    #[test]
    fn surface_document() {
        let text = r#"{"rank": 2, "gram": [[1,0],[0,-1]], "negative_curves": [[0,1]],
            "effective_generators": [[0,1],[1,-1]], "D": [3,-1], "C": [1, {"num": 0, "den": 1}],
            "point_multiplicities": {"0": 1}}"#;
        let p = parse_surface_str(text, "inline").unwrap();
        assert_eq!(p.point_multiplicities, vec![1]);
        assert_eq!(p.d, vec![Rational::from_i64(3), Rational::from_i64(-1)]);
    }
}
