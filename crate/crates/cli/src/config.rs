use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use boolval::boolmodel::{BooleanModelSpec, GrainModel, OrientationLaw, ScaleLaw};
use boolval::geom2d::{ConvexPolygon, Vec2, Window};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// One experiment: the model, the replication budget and output location.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub seed: u64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    pub model: ModelConfig,
    #[serde(default)]
    pub l_max: Option<u32>,
    #[serde(default)]
    pub s_max: Option<usize>,
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_reps() -> usize {
    100
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub gamma: f64,
    pub grain: GrainConfig,
    pub window: WindowConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrainConfig {
    pub shapes: Vec<ShapeConfig>,
    /// Defaults to equal weights.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    pub orientation: OrientationLaw,
    #[serde(default)]
    pub scale: ScaleLaw,
}

/// Named shape generators. Shapes are recentred on their circumcentre.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeConfig {
    /// Inscribed regular polygon approximating a disk.
    Disk {
        radius: f64,
        #[serde(default = "default_disk_sides")]
        sides: usize,
    },
    Regular {
        sides: usize,
        radius: f64,
    },
    Square {
        side: f64,
    },
    Rect {
        width: f64,
        height: f64,
    },
    /// Vertices in counterclockwise order.
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
}

fn default_disk_sides() -> usize {
    256
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowConfig {
    UnitSquare,
    Rect { min: [f64; 2], max: [f64; 2] },
    Polygon { vertices: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

fn positive(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{field} must be positive, got {x}")))
    }
}

fn points(vs: &[[f64; 2]]) -> Vec<Vec2> {
    vs.iter().map(|&[x, y]| Vec2::new(x, y)).collect()
}

impl ShapeConfig {
    pub fn build(&self, field: &str) -> Result<ConvexPolygon> {
        match *self {
            ShapeConfig::Disk { radius, sides } | ShapeConfig::Regular { sides, radius } => {
                positive(&format!("{field}.radius"), radius)?;
                if sides < 3 {
                    return Err(CliError::Config(format!("{field}.sides must be at least 3, got {sides}")));
                }
                Ok(ConvexPolygon::regular_ngon(sides, radius))
            }
            ShapeConfig::Square { side } => {
                positive(&format!("{field}.side"), side)?;
                Ok(ConvexPolygon::square(side))
            }
            ShapeConfig::Rect { width, height } => {
                positive(&format!("{field}.width"), width)?;
                positive(&format!("{field}.height"), height)?;
                Ok(ConvexPolygon::rect(width, height))
            }
            ShapeConfig::Polygon { ref vertices } => ConvexPolygon::from_ccw(points(vertices))
                .map_err(|e| CliError::Config(format!("{field}: {e}"))),
        }
    }
}

impl WindowConfig {
    pub fn build(&self) -> Result<Window> {
        let w = match self {
            WindowConfig::UnitSquare => Ok(Window::unit_square()),
            WindowConfig::Rect { min, max } => Window::rect(Vec2::new(min[0], min[1]), Vec2::new(max[0], max[1])),
            WindowConfig::Polygon { vertices } => ConvexPolygon::from_ccw(points(vertices)).and_then(Window::new),
        };
        w.map_err(|e| CliError::Config(format!("model.window: {e}")))
    }
}

impl ModelConfig {
    pub fn build(&self) -> Result<BooleanModelSpec> {
        let g = &self.grain;
        if g.shapes.is_empty() {
            return Err(CliError::Config("model.grain.shapes must not be empty".into()));
        }
        let shapes = g
            .shapes
            .iter()
            .enumerate()
            .map(|(i, s)| s.build(&format!("model.grain.shapes[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let n = shapes.len();
        let weights = g.weights.clone().unwrap_or_else(|| vec![1.0 / n as f64; n]);
        let grain = GrainModel::new(shapes, weights, g.orientation.clone(), g.scale.clone())
            .map_err(|e| CliError::Config(format!("model.grain: {e}")))?;
        BooleanModelSpec::new(self.gamma, grain, self.window.build()?)
            .map_err(|e| CliError::Config(format!("model: {e}")))
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        cfg.model.build()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn spec(&self) -> Result<BooleanModelSpec> {
        self.model.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DISKS: &str = r#"{
        "schema_version": 1,
        "seed": 3,
        "model": {
            "gamma": 50,
            "grain": {"shapes": [{"kind": "disk", "radius": 0.05}], "orientation": {"law": "uniform"}},
            "window": {"kind": "unit_square"}
        }
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::parse(DISKS).unwrap();
        assert_eq!(cfg.reps, 100);
        let spec = cfg.spec().unwrap();
        assert_eq!(spec.grain.shapes()[0].len(), 256);
        assert!(spec.grain.is_isotropic());
    }

    #[test]
    fn seed_is_mandatory() {
        let text = DISKS.replace("\"seed\": 3,", "");
        let err = ExperimentConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("seed"), "{err}");
    }

    #[test]
    fn errors_name_the_field() {
        let err = ExperimentConfig::parse(&DISKS.replace("\"gamma\": 50", "\"gamma\": -1")).unwrap_err();
        assert!(err.to_string().contains("gamma"), "{err}");
        let err = ExperimentConfig::parse(&DISKS.replace("\"radius\": 0.05", "\"radius\": 0")).unwrap_err();
        assert!(err.to_string().contains("shapes[0].radius"), "{err}");
        let err = ExperimentConfig::parse(&DISKS.replace("\"schema_version\": 1", "\"schema_version\": 9")).unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn syntax_errors_report_the_line() {
        let err = ExperimentConfig::parse("{\n \"schema_version\": 1,\n oops }").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = DISKS.replace("\"seed\": 3,", "\"seed\": 3, \"sede\": 4,");
        assert!(ExperimentConfig::parse(&text).is_err());
    }
}
