//! Scene files: JSON descriptions of an annulus together with the wedges
//! and strips placed on it.

use std::collections::BTreeMap;
use std::fmt;

use plankcov::{AngularDomain, AnnulusConfig, GeomError, PointXY, RegularDomain, Strip};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: u32,
    pub config: ConfigSpec,
    #[serde(default)]
    pub domains: Vec<DomainSpec>,
    #[serde(default)]
    pub strips: Vec<StripSpec>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Angular(AngularSpec),
    Regular(RegularSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngularSpec {
    pub vertex: [f64; 2],
    pub start_angle: f64,
    pub sweep: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularSpec {
    pub vertex_angle: f64,
    pub chirality: i32,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripSpec {
    pub normal_angle: f64,
    pub offset_low: f64,
    pub offset_high: f64,
}

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        #[source]
        source: GeomError,
    },
    #[error("version: unsupported scene version {0}, expected {SCENE_VERSION}")]
    Version(u32),
}

impl SceneError {
    pub fn path(&self) -> &str {
        match self {
            SceneError::Parse { path, .. } | SceneError::Invalid { path, .. } => path,
            SceneError::Version(_) => "version",
        }
    }
}

/// A domain of a validated scene. Regular domains keep their parameters so
/// that closed forms stay available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SceneDomain {
    Angular(AngularDomain),
    Regular(RegularDomain),
}

impl SceneDomain {
    pub fn angular(&self) -> AngularDomain {
        match self {
            SceneDomain::Angular(d) => *d,
            SceneDomain::Regular(d) => d.to_angular(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SceneDomain::Angular(_) => "angular",
            SceneDomain::Regular(_) => "regular",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub config: AnnulusConfig,
    pub domains: Vec<SceneDomain>,
    pub strips: Vec<Strip>,
    pub metadata: BTreeMap<String, String>,
}

impl Scene {
    pub fn empty(config: AnnulusConfig) -> Self {
        Self {
            config,
            domains: Vec::new(),
            strips: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn angular_domains(&self) -> Vec<AngularDomain> {
        self.domains.iter().map(SceneDomain::angular).collect()
    }
}

pub fn parse_scene_file(text: &str) -> Result<SceneFile, SceneError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        SceneError::Parse {
            path: if path == "." { "<root>".to_string() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    parse_scene_file(text)?.validate()
}

fn invalid(path: impl fmt::Display) -> impl FnOnce(GeomError) -> SceneError {
    let path = path.to_string();
    move |source| SceneError::Invalid { path, source }
}

// field of a domain that a geometry error refers to
fn domain_field(err: &GeomError) -> &'static str {
    match err {
        GeomError::SweepOutOfRange(_) => ".sweep",
        GeomError::AlphaOutOfRange { .. } => ".alpha",
        GeomError::BadChirality(_) => ".chirality",
        _ => "",
    }
}

impl SceneFile {
    pub fn validate(&self) -> Result<Scene, SceneError> {
        if self.version != SCENE_VERSION {
            return Err(SceneError::Version(self.version));
        }
        let config = AnnulusConfig::new(self.config.r, self.config.big_r).map_err(invalid("config"))?;
        let mut domains = Vec::with_capacity(self.domains.len());
        for (i, spec) in self.domains.iter().enumerate() {
            let built = match *spec {
                DomainSpec::Angular(a) => {
                    AngularDomain::new(PointXY::new(a.vertex[0], a.vertex[1]), a.start_angle, a.sweep).map(SceneDomain::Angular)
                }
                DomainSpec::Regular(g) => RegularDomain::new(config, g.vertex_angle, g.chirality, g.alpha).map(SceneDomain::Regular),
            };
            domains.push(built.map_err(|e| {
                let field = domain_field(&e);
                invalid(format!("domains[{i}]{field}"))(e)
            })?);
        }
        let strips = self
            .strips
            .iter()
            .enumerate()
            .map(|(i, s)| Strip::new(s.normal_angle, s.offset_low, s.offset_high).map_err(invalid(format!("strips[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Scene {
            config,
            domains,
            strips,
            metadata: self.metadata.clone(),
        })
    }
}

impl From<&Scene> for SceneFile {
    fn from(scene: &Scene) -> Self {
        let domains = scene
            .domains
            .iter()
            .map(|d| match d {
                SceneDomain::Angular(a) => DomainSpec::Angular(AngularSpec {
                    vertex: [a.vertex.x, a.vertex.y],
                    start_angle: a.start_angle,
                    sweep: a.sweep,
                }),
                SceneDomain::Regular(g) => DomainSpec::Regular(RegularSpec {
                    vertex_angle: g.vertex_angle,
                    chirality: i32::from(g.chirality),
                    alpha: g.alpha,
                }),
            })
            .collect();
        let strips = scene
            .strips
            .iter()
            .map(|s| StripSpec {
                normal_angle: s.normal_angle,
                offset_low: s.offset_low,
                offset_high: s.offset_high,
            })
            .collect();
        SceneFile {
            version: SCENE_VERSION,
            config: ConfigSpec {
                r: scene.config.inner_radius(),
                big_r: scene.config.outer_radius(),
            },
            domains,
            strips,
            metadata: scene.metadata.clone(),
        }
    }
}

pub fn to_json(file: &SceneFile) -> String {
    serde_json::to_string_pretty(file).expect("scene files always serialize")
}
