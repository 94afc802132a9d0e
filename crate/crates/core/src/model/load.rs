use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::{Cost, ModelError, Wts, WtsBuilder};

/// JSON model document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub states: Vec<StateDoc>,
    pub initial: Vec<String>,
    pub secret: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidirectional: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub name: String,
    pub label: Vec<String>,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub to: String,
    pub weight: Number,
}

/// Parses a JSON decimal literal (`12`, `-0.25`, `1.5e-3`) into an exact
/// rational.
pub fn parse_decimal(text: &str) -> Option<Cost> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: i64 = all.trim_start_matches('0').parse().unwrap_or(0);
    if all.trim_start_matches('0').len() > 18 {
        return None;
    }
    let mut denom: i64 = 1;
    let mut e = exp - frac_part.len() as i32;
    while e > 0 {
        numer = numer.checked_mul(10)?;
        e -= 1;
    }
    while e < 0 {
        denom = denom.checked_mul(10)?;
        e += 1;
    }
    if neg {
        numer = -numer;
    }
    Some(Cost::new(numer, denom))
}

/// Renders an exact cost as a JSON number: integers stay integers, terminating
/// decimals are written exactly, anything else falls back to `f64`.
pub fn cost_to_json(c: Cost) -> Number {
    if c.is_integer() {
        return Number::from(c.to_integer());
    }
    let mut d = *c.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d == 1 {
        let places = twos.max(fives);
        if let Some(scaled) = 10i64
            .checked_pow(places)
            .and_then(|p| c.numer().checked_mul(p / c.denom()))
        {
            let neg = scaled < 0;
            let digits = format!(
                "{:0>width$}",
                scaled.unsigned_abs(),
                width = places as usize + 1
            );
            let (i, f) = digits.split_at(digits.len() - places as usize);
            let text = format!("{}{i}.{f}", if neg { "-" } else { "" });
            if let Ok(n) = text.parse::<Number>() {
                return n;
            }
        }
    }
    let f = *c.numer() as f64 / *c.denom() as f64;
    Number::from_f64(f).unwrap_or_else(|| Number::from(0))
}

impl ModelDoc {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| ModelError::Schema {
            path: e.path().to_string(),
            message: e.into_inner().to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model document serializes")
    }

    pub fn build(&self) -> Result<Wts, ModelError> {
        let mut b = WtsBuilder::default();
        for s in &self.states {
            if !valid_name(&s.name) {
                return Err(ModelError::InvalidName(s.name.clone()));
            }
            b.add_state(&s.name, s.label.iter().cloned(), &s.output);
        }
        for n in &self.initial {
            b.add_initial(n);
        }
        for n in &self.secret {
            b.add_secret(n);
        }
        let bidirectional = self.bidirectional.unwrap_or(false);
        for (i, t) in self.transitions.iter().enumerate() {
            let text = t.weight.to_string();
            let w = parse_decimal(&text).ok_or_else(|| ModelError::BadWeight {
                path: format!("transitions[{i}].weight"),
                text: text.clone(),
            })?;
            b.add_edge(&t.from, &t.to, w);
            if bidirectional && t.from != t.to {
                b.add_edge(&t.to, &t.from, w);
            }
        }
        b.build()
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_control() || c == '"')
}

impl Wts {
    /// Parses and validates a JSON model document.
    pub fn from_json(text: &str) -> Result<Wts, ModelError> {
        ModelDoc::from_json(text)?.build()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Wts, ModelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::Schema {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Wts::from_json(&text)
    }

    /// Writes the system back out as a document with one entry per directed
    /// transition.
    pub fn to_doc(&self) -> ModelDoc {
        ModelDoc {
            states: (0..self.len())
                .map(|q| StateDoc {
                    name: self.name(q).to_string(),
                    label: self.label(q).iter().cloned().collect(),
                    output: self.output(q).to_string(),
                })
                .collect(),
            initial: self
                .initial()
                .iter()
                .map(|&q| self.name(q).to_string())
                .collect(),
            secret: self
                .secret()
                .iter()
                .map(|&q| self.name(q).to_string())
                .collect(),
            transitions: self
                .transitions()
                .map(|(u, v, w)| TransitionDoc {
                    from: self.name(u).to_string(),
                    to: self.name(v).to_string(),
                    weight: cost_to_json(w),
                })
                .collect(),
            bidirectional: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::factory;

    const FACTORY: &str = r#"{
      "states": [
        {"name": "A", "label": [], "output": "Sand"},
        {"name": "B", "label": [], "output": "Sand"},
        {"name": "C", "label": [], "output": "Sand"},
        {"name": "D", "label": [], "output": "Grass"},
        {"name": "E", "label": ["P2"], "output": "Grass"},
        {"name": "F", "label": ["P1"], "output": "Sand"}
      ],
      "initial": ["A", "B"],
      "secret": ["A"],
      "transitions": [
        {"from": "A", "to": "C", "weight": 1},
        {"from": "A", "to": "D", "weight": 3},
        {"from": "B", "to": "D", "weight": 2},
        {"from": "C", "to": "F", "weight": 1},
        {"from": "D", "to": "F", "weight": 1},
        {"from": "F", "to": "E", "weight": 1}
      ],
      "bidirectional": true
    }"#;

    #[test]
    fn loads_factory_document() {
        let t = Wts::from_json(FACTORY).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.initial().len(), 2);
        assert_eq!(t.secret(), &[t.id("A").unwrap()]);
        assert_eq!(t, factory());
    }

    #[test]
    fn zero_weight_rejected() {
        let doc = FACTORY.replace("\"weight\": 3", "\"weight\": 0");
        let err = Wts::from_json(&doc).unwrap_err();
        assert!(matches!(err, ModelError::NonPositiveWeight { .. }));
        assert!(err.to_string().contains("weight ≤ 0"));
    }

    #[test]
    fn secret_outside_initial_rejected() {
        let doc = FACTORY.replace("\"secret\": [\"A\"]", "\"secret\": [\"C\"]");
        assert_eq!(
            Wts::from_json(&doc).unwrap_err(),
            ModelError::SecretNotInitial("C".into())
        );
    }

    #[test]
    fn schema_errors_name_the_field() {
        let doc = FACTORY.replace("\"output\": \"Grass\"}", "\"outputs\": \"Grass\"}");
        match Wts::from_json(&doc).unwrap_err() {
            ModelError::Schema { path, .. } => assert!(path.starts_with("states["), "{path}"),
            e => panic!("unexpected {e:?}"),
        }
        let doc = FACTORY.replace("\"to\": \"E\"", "\"to\": \"Z\"");
        assert!(matches!(
            Wts::from_json(&doc),
            Err(ModelError::UnknownState { .. })
        ));
    }

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_decimal("1"), Some(Cost::from(1)));
        assert_eq!(parse_decimal("0.1"), Some(Cost::new(1, 10)));
        assert_eq!(parse_decimal("-2.50"), Some(Cost::new(-5, 2)));
        assert_eq!(parse_decimal("1.5e2"), Some(Cost::from(150)));
        assert_eq!(parse_decimal("25e-3"), Some(Cost::new(1, 40)));
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_decimal("."), None);
    }

    #[test]
    fn costs_render_as_json_numbers() {
        assert_eq!(cost_to_json(Cost::from(3)).to_string(), "3");
        assert_eq!(cost_to_json(Cost::new(5, 2)).to_string(), "2.5");
        assert_eq!(cost_to_json(Cost::new(1, 40)).to_string(), "0.025");
        assert_eq!(cost_to_json(Cost::new(-3, 4)).to_string(), "-0.75");
    }

    #[test]
    fn document_round_trip() {
        let t = factory();
        let again = t.to_doc().build().unwrap();
        assert_eq!(t, again);
    }
}
