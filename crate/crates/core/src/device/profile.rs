use serde::{Deserialize, Serialize};

use super::DeviceError;
use crate::ui::Rect;

/// Deterministic layout perturbation observed on some physical devices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Quirk {
    /// Every container of this class gains `extra_dp` of empty space at its
    /// bottom; content laid out below it moves down by the same amount.
    #[serde(rename_all = "camelCase")]
    ExtraBottomSpace { container_class: String, extra_dp: f64 },
    /// Every container of this class shows one additional leading item.
    #[serde(rename_all = "camelCase")]
    ExtraListItem { container_class: String, item_text: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeviceProfile {
    pub name: String,
    pub width_px: i32,
    pub height_px: i32,
    /// Pixels per density-independent unit.
    pub density: f64,
    #[serde(default)]
    pub quirks: Vec<Quirk>,
}

impl DeviceProfile {
    pub fn new(name: impl Into<String>, width_px: i32, height_px: i32, density: f64) -> Result<Self, DeviceError> {
        let profile = DeviceProfile { name: name.into(), width_px, height_px, density, quirks: Vec::new() };
        profile.validate()?;
        Ok(profile)
    }

    pub fn with_quirk(mut self, quirk: Quirk) -> Result<Self, DeviceError> {
        self.quirks.push(quirk);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        let invalid = |reason: &str| DeviceError::InvalidProfile { name: self.name.clone(), reason: reason.into() };
        if self.width_px <= 0 || self.height_px <= 0 {
            return Err(invalid("screen dimensions must be positive"));
        }
        if !(self.density.is_finite() && self.density > 0.0) {
            return Err(invalid("density must be positive"));
        }
        for quirk in &self.quirks {
            if let Quirk::ExtraBottomSpace { extra_dp, .. } = quirk {
                if !(extra_dp.is_finite() && *extra_dp > 0.0) {
                    return Err(invalid("extra bottom space must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn screen(&self) -> Rect {
        Rect::sized(self.width_px, self.height_px).expect("validated dimensions")
    }

    pub fn from_json(s: &str) -> Result<Self, DeviceError> {
        let profile: DeviceProfile =
            serde_json::from_str(s).map_err(|e| DeviceError::Json(format!("device profile: {e}")))?;
        profile.validate()?;
        Ok(profile)
    }
}
