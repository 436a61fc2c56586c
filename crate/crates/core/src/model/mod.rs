//! System model: configuration, Rayleigh channel draws with an imperfectly
//! estimated eavesdropper link, antenna-group selection, the spatial-modulation
//! super-alphabet, and maximum-likelihood detection.

mod aag;
pub mod alphabet;
mod channel;
mod config;
mod detect;

pub use aag::{select_subchannel, Aag};
pub use alphabet::{build_super_alphabet, make_constellation, SuperAlphabet};
pub use channel::{sample_channel, ChannelRealization};
pub use config::{derive_n_active, SystemConfig};
pub use detect::ml_detect;
