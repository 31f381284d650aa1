//! Checkpoint serialization: JSON with a version field, a config echo, the
//! network shape, and flat weight arrays named `layer.<i>.{w,b}` for the
//! trunk plus `gate_head`/`perm_head`/`value_head`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{AgentError, Result};
use crate::net::{NetShape, PolicyParams};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub shape: NetShape,
    pub config: serde_json::Value,
    pub params: BTreeMap<String, Vec<f64>>,
}

impl Checkpoint {
    pub fn from_params(params: &PolicyParams, config: serde_json::Value) -> Self {
        let mut map = BTreeMap::new();
        map.insert("layer.0.w".to_string(), params.w1.clone());
        map.insert("layer.0.b".to_string(), params.b1.clone());
        map.insert("layer.1.w".to_string(), params.w2.clone());
        map.insert("layer.1.b".to_string(), params.b2.clone());
        map.insert("gate_head.w".to_string(), params.wg.clone());
        map.insert("gate_head.b".to_string(), params.bg.clone());
        map.insert("perm_head.w".to_string(), params.wp.clone());
        map.insert("perm_head.b".to_string(), params.bp.clone());
        map.insert("value_head.w".to_string(), params.wv.clone());
        map.insert("value_head.b".to_string(), vec![params.bv]);
        Checkpoint {
            version: CHECKPOINT_VERSION,
            shape: params.shape,
            config,
            params: map,
        }
    }

    pub fn to_params(&self) -> Result<PolicyParams> {
        if self.version != CHECKPOINT_VERSION {
            return Err(AgentError::InvalidCheckpoint(format!(
                "unsupported version {}",
                self.version
            )));
        }
        let mut params = PolicyParams::zeros(self.shape);
        let fetch = |key: &str, expected: usize| -> Result<Vec<f64>> {
            let values = self
                .params
                .get(key)
                .ok_or_else(|| AgentError::InvalidCheckpoint(format!("missing {key}")))?;
            if values.len() != expected {
                return Err(AgentError::InvalidCheckpoint(format!(
                    "{key} has {} values, expected {expected}",
                    values.len()
                )));
            }
            Ok(values.clone())
        };
        params.w1 = fetch("layer.0.w", params.w1.len())?;
        params.b1 = fetch("layer.0.b", params.b1.len())?;
        params.w2 = fetch("layer.1.w", params.w2.len())?;
        params.b2 = fetch("layer.1.b", params.b2.len())?;
        params.wg = fetch("gate_head.w", params.wg.len())?;
        params.bg = fetch("gate_head.b", params.bg.len())?;
        params.wp = fetch("perm_head.w", params.wp.len())?;
        params.bp = fetch("perm_head.b", params.bp.len())?;
        params.wv = fetch("value_head.w", params.wv.len())?;
        params.bv = fetch("value_head.b", 1)?[0];
        if !params.all_finite() {
            return Err(AgentError::InvalidCheckpoint(
                "non-finite parameter values".into(),
            ));
        }
        Ok(params)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| AgentError::InvalidCheckpoint(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| AgentError::InvalidCheckpoint(e.to_string()))
    }
}
