use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    pub manifest_path: PathBuf,
    pub annotations_path: PathBuf,
    pub session_log_path: PathBuf,
    /// `host:port`
    pub listen_address: String,
    pub page_size_default: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{0} must be a non-empty path")]
    EmptyPath(&'static str),
    #[error("listen address {0:?} is not host:port")]
    ListenAddress(String),
    #[error("page size must be at least 1")]
    PageSize,
}

impl ServiceConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, path) in [
            ("manifest", &self.manifest_path),
            ("annotations", &self.annotations_path),
            ("session log", &self.session_log_path),
        ] {
            if path.as_os_str().is_empty() {
                return Err(ConfigError::EmptyPath(name));
            }
        }
        match self.listen_address.rsplit_once(':') {
            Some((host, port)) if !host.is_empty() && port.parse::<u16>().is_ok() => {}
            _ => return Err(ConfigError::ListenAddress(self.listen_address.clone())),
        }
        if self.page_size_default == 0 {
            return Err(ConfigError::PageSize);
        }
        Ok(())
    }
}
