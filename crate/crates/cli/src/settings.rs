//! Parameter resolution. Values come from command-line flags first, then
//! from an optional TOML config file, then from built-in defaults. Config
//! keys use underscores where flags use hyphens (`k_min` for `--k-min`).

use std::error::Error;
use std::path::Path;
use toml::{Table, Value};

pub struct Settings {
    table: Table,
}

type Fallible<T> = Result<T, Box<dyn Error>>;

fn as_number(v: &Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Fallible<Self> {
        let table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                text.parse::<Table>()
                    .map_err(|e| format!("config {}: {e}", p.display()))?
            }
            None => Table::new(),
        };
        Ok(Settings { table })
    }

    pub fn f64_opt(&self, key: &str, flag: Option<f64>) -> Fallible<Option<f64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => match as_number(v) {
                Some(x) => Ok(Some(x)),
                None => Err(format!("config key `{key}` must be a number").into()),
            },
        }
    }

    pub fn f64_or(&self, key: &str, flag: Option<f64>, default: f64) -> Fallible<f64> {
        Ok(self.f64_opt(key, flag)?.unwrap_or(default))
    }

    pub fn f64_req(&self, key: &str, flag: Option<f64>) -> Fallible<f64> {
        self.f64_opt(key, flag)?.ok_or_else(|| {
            format!(
                "missing required parameter --{} (flag or config key `{key}`)",
                key.replace('_', "-")
            )
            .into()
        })
    }

    pub fn i64_or(&self, key: &str, flag: Option<i64>, default: i64) -> Fallible<i64> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.table.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_integer()
                .ok_or_else(|| format!("config key `{key}` must be an integer").into()),
        }
    }

    pub fn usize_or(&self, key: &str, flag: Option<usize>, default: usize) -> Fallible<usize> {
        if let Some(v) = flag {
            return Ok(v);
        }
        let v = self.i64_or(key, None, default as i64)?;
        usize::try_from(v).map_err(|_| format!("config key `{key}` must be nonnegative").into())
    }

    pub fn str_or(&self, key: &str, flag: Option<&str>, default: &str) -> Fallible<String> {
        if let Some(v) = flag {
            return Ok(v.to_string());
        }
        match self.table.get(key) {
            None => Ok(default.to_string()),
            Some(v) => match v.as_str() {
                Some(s) => Ok(s.to_string()),
                None => Err(format!("config key `{key}` must be a string").into()),
            },
        }
    }

    /// Repeatable flag backed by a TOML array; flags win as a block when
    /// any are present.
    pub fn f64_list(&self, key: &str, flags: &[f64]) -> Fallible<Vec<f64>> {
        if !flags.is_empty() {
            return Ok(flags.to_vec());
        }
        match self.table.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    as_number(v)
                        .ok_or_else(|| format!("config key `{key}` must hold numbers").into())
                })
                .collect(),
            Some(_) => Err(format!("config key `{key}` must be an array").into()),
        }
    }

    pub fn str_list(&self, key: &str, flags: &[String]) -> Fallible<Vec<String>> {
        if !flags.is_empty() {
            return Ok(flags.to_vec());
        }
        match self.table.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| format!("config key `{key}` must hold strings").into())
                })
                .collect(),
            Some(_) => Err(format!("config key `{key}` must be an array").into()),
        }
    }
}
