//! Min-sum belief propagation with ordered-statistics post-processing, and the
//! two-sector CSS decoder built on them.

mod bp;
mod osd;

pub use bp::{bp_minsum, BpDecoder};
pub use osd::osd_postprocess;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::code::CssCode;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OsdMode {
    Off,
    Order0,
    #[default]
    Sweep,
}

impl std::str::FromStr for OsdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(OsdMode::Off),
            "order0" | "0" => Ok(OsdMode::Order0),
            "sweep" => Ok(OsdMode::Sweep),
            other => Err(Error::Parse(format!("unknown OSD mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub max_iter: usize,
    pub ms_scale: f64,
    /// Width of the weight-2 sweep; `None` means the ring dimension of the
    /// code being decoded.
    pub osd_order: Option<usize>,
    pub osd_mode: OsdMode,
    /// Run OSD even when BP converged.
    pub osd_always: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            max_iter: 40,
            ms_scale: 0.625,
            osd_order: None,
            osd_mode: OsdMode::Sweep,
            osd_always: false,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ms_scale > 0.0 && self.ms_scale <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "ms_scale must lie in (0, 1], got {}",
                self.ms_scale
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_osd_order(mut self, order: usize) -> Self {
        self.osd_order = Some(order);
        self
    }

    pub(crate) fn order_or(&self, fallback: usize) -> usize {
        self.osd_order.unwrap_or(fallback)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub estimate: BitVec,
    /// Posterior log-likelihood ratios; positive favours "no error".
    pub soft: Vec<f64>,
    pub bp_converged: bool,
    pub osd_used: bool,
    pub iterations: usize,
}

/// `ln((1 - p) / p)`, with `p` kept away from 0 and 1.
pub fn prior_llr(p: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    ((1.0 - p) / p).ln()
}

/// Decoder for both error types of one code; keeps scratch buffers between calls.
#[derive(Clone)]
pub struct CssDecoder {
    cfg: DecoderConfig,
    /// Decodes X errors from `hz * ex`.
    x_errors: BpDecoder,
    /// Decodes Z errors from `hx * ez`.
    z_errors: BpDecoder,
}

impl CssDecoder {
    pub fn new(code: &CssCode, cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let cfg = DecoderConfig {
            osd_order: Some(cfg.order_or(code.ell())),
            ..cfg
        };
        Ok(CssDecoder {
            cfg,
            x_errors: BpDecoder::new(code.hz()),
            z_errors: BpDecoder::new(code.hx()),
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.cfg
    }

    /// Decodes one error type: X errors against `hz` when `x_errors`, else Z errors against `hx`.
    pub fn decode_sector(&mut self, x_errors: bool, syndrome: &BitVec, p: f64) -> Result<DecodeOutcome> {
        let dec = if x_errors { &mut self.x_errors } else { &mut self.z_errors };
        let n = dec.cols();
        let bp = dec.run(syndrome, &vec![prior_llr(p); n], &self.cfg)?;
        if self.cfg.osd_mode == OsdMode::Off || (bp.bp_converged && !self.cfg.osd_always) {
            return Ok(bp);
        }
        let mut out = osd_postprocess(dec.matrix(), syndrome, &bp.soft, &self.cfg)?;
        out.bp_converged = bp.bp_converged;
        out.iterations = bp.iterations;
        Ok(out)
    }

    /// Returns `(ex, ez)` from `syndrome_x = hx * ez` and `syndrome_z = hz * ex`,
    /// with per-bit priors `px` for X components and `pz` for Z components.
    pub fn decode_with_priors(
        &mut self,
        syndrome_x: &BitVec,
        syndrome_z: &BitVec,
        px: f64,
        pz: f64,
    ) -> Result<(BitVec, BitVec)> {
        let ex = self.decode_sector(true, syndrome_z, px)?.estimate;
        let ez = self.decode_sector(false, syndrome_x, pz)?.estimate;
        Ok((ex, ez))
    }
}

/// Two-sector decode under uniform depolarizing noise of total rate `p`
/// (each sector sees marginal `2p/3`).
pub fn decode(
    code: &CssCode,
    syndrome_x: &BitVec,
    syndrome_z: &BitVec,
    p: f64,
    cfg: &DecoderConfig,
) -> Result<(BitVec, BitVec)> {
    let mut dec = CssDecoder::new(code, *cfg)?;
    let marginal = 2.0 * p / 3.0;
    dec.decode_with_priors(syndrome_x, syndrome_z, marginal, marginal)
}
