//! Kernel selection: which classification implementation indexes windows.
//!
//! Selection precedence is explicit request, then the `ZONEFAST_KERNEL`
//! environment variable, then the best kernel the CPU supports. A request for
//! an unsupported kernel is an error at the API boundary rather than a silent
//! downgrade, so benchmark numbers always mean what they claim.

use std::fmt;

/// Classification kernel for the structural indexing stage.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kernel {
    /// Portable table-driven byte loop.
    Scalar,
    /// 128-bit vectors (SSE2 baseline on x86-64).
    V128,
    /// 256-bit vectors (AVX2, runtime detected).
    V256,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Scalar => "scalar",
            Kernel::V128 => "v128",
            Kernel::V256 => "v256",
        }
    }

    pub fn from_name(name: &str) -> Option<Kernel> {
        match name {
            "scalar" => Some(Kernel::Scalar),
            "v128" => Some(Kernel::V128),
            "v256" => Some(Kernel::V256),
            _ => None,
        }
    }

    /// Whether this kernel can run on the current CPU.
    pub fn is_available(self) -> bool {
        match self {
            Kernel::Scalar => true,
            #[cfg(target_arch = "x86_64")]
            Kernel::V128 => true,
            #[cfg(not(target_arch = "x86_64"))]
            Kernel::V128 => false,
            #[cfg(target_arch = "x86_64")]
            Kernel::V256 => std::arch::is_x86_feature_detected!("avx2"),
            #[cfg(not(target_arch = "x86_64"))]
            Kernel::V256 => false,
        }
    }

    /// The fastest kernel available on this CPU.
    pub fn auto() -> Kernel {
        if Kernel::V256.is_available() {
            Kernel::V256
        } else if Kernel::V128.is_available() {
            Kernel::V128
        } else {
            Kernel::Scalar
        }
    }

    /// Resolves an optional explicit choice against `ZONEFAST_KERNEL` and
    /// auto-detection, in that order. A malformed environment value is
    /// ignored; an unavailable choice falls through to detection only when it
    /// came from the environment.
    pub fn select(explicit: Option<Kernel>) -> Kernel {
        if let Some(k) = explicit {
            return k;
        }
        if let Ok(val) = std::env::var("ZONEFAST_KERNEL") {
            if let Some(k) = Kernel::from_name(val.trim()) {
                if k.is_available() {
                    return k;
                }
            }
        }
        Kernel::auto()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
