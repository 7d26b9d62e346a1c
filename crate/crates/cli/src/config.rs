//! Defaults for flags left unset: built-in values, overridden by the JSON
//! file named in `LIDSTONE_CONFIG`.

use std::fs;

use serde::Deserialize;

use crate::InputError;

pub const CONFIG_ENV: &str = "LIDSTONE_CONFIG";

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Defaults {
    pub t_max: usize,
    pub nodes: usize,
    pub tol: f64,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            t_max: 60,
            nodes: 256,
            tol: 1e-9,
        }
    }
}

impl Defaults {
    pub fn load() -> Result<Self, InputError> {
        match std::env::var_os(CONFIG_ENV) {
            None => Ok(Self::default()),
            Some(path) => {
                let body = fs::read_to_string(&path).map_err(|e| {
                    InputError(format!("cannot read {CONFIG_ENV} file {path:?}: {e}"))
                })?;
                Self::from_json(&body)
            }
        }
    }

    pub fn from_json(body: &str) -> Result<Self, InputError> {
        serde_json::from_str(body)
            .map_err(|e| InputError(format!("invalid {CONFIG_ENV} contents: {e}")))
    }
}
