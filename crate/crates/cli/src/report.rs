use serde_json::{Map, Value as Json};

/// A report value; text encoding joins vectors with `,` and lists of vectors
/// with `;`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(i128),
    Text(String),
    Vector(Vec<i64>),
    Vectors(Vec<Vec<i64>>),
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<&[i64]> for Value {
    fn from(v: &[i64]) -> Self {
        Value::Vector(v.to_vec())
    }
}

impl From<Vec<i64>> for Value {
    fn from(v: Vec<i64>) -> Self {
        Value::Vector(v)
    }
}

impl From<Vec<Vec<i64>>> for Value {
    fn from(v: Vec<Vec<i64>>) -> Self {
        Value::Vectors(v)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(x: $t) -> Self {
                Value::Int(x as i128)
            }
        }
    )*};
}
int_value!(i64, u64, usize, u32);

fn join(v: &[i64]) -> String {
    chipfire::format_vector(v)
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(x) => x.to_string(),
            Value::Text(s) => s.clone(),
            Value::Vector(v) => join(v),
            Value::Vectors(vs) => vs.iter().map(|v| join(v)).collect::<Vec<_>>().join(";"),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Bool(b) => Json::Bool(*b),
            Value::Int(x) => match i64::try_from(*x) {
                Ok(x) => Json::from(x),
                Err(_) => Json::String(x.to_string()),
            },
            Value::Text(s) => Json::String(s.clone()),
            Value::Vector(v) => Json::from(v.clone()),
            Value::Vectors(vs) => Json::from(vs.clone()),
        }
    }
}

/// Ordered `key=value` report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(&v.text());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        for (k, v) in &self.entries {
            map.insert(k.clone(), v.json());
        }
        let mut s = serde_json::to_string(&Json::Object(map)).expect("report values serialize");
        s.push('\n');
        s
    }
}
