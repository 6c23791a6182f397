use std::path::Path;

use anyhow::{bail, Context, Result};
use holocap::{parse_channel, QubitChannel};

/// Read a channel file and check complete positivity. With `allow_noncp` a
/// failed check is logged instead of rejected.
pub fn parse_channel_file(path: &Path, allow_noncp: bool) -> Result<QubitChannel> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ch = parse_channel(&text).with_context(|| format!("in {}", path.display()))?;
    let cp = ch.is_cp();
    if !cp.completely_positive {
        if !allow_noncp {
            bail!(
                "{}: channel is not completely positive (minimum Choi eigenvalue {:.3e}); pass --allow-noncp to continue",
                path.display(),
                cp.margin
            );
        }
        log::warn!(
            "{}: channel is not completely positive (margin {:.3e})",
            path.display(),
            cp.margin
        );
    }
    Ok(ch)
}
