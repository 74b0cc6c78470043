use crate::embeddings::EmbeddingSpace;
use crate::{Error, Result};

/// Coordinate frame an embedding space inhabits within the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// The source language's own monolingual coordinates.
    SourceRaw,
    /// The related language's monolingual coordinates (stage-1 target).
    ZMono,
    /// The jointly-trained coordinate system of stage 2.
    ZJoint,
    /// The final shared coordinates after stage 3 (the z-joint frame the
    /// mapped source now shares with the target).
    Final,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::SourceRaw => "source-raw",
            Frame::ZMono => "z-mono",
            Frame::ZJoint => "z-joint",
            Frame::Final => "final",
        }
    }
}

/// An embedding space tagged with its coordinate frame. Stage boundaries
/// check frames so a space can never silently cross into the wrong stage.
#[derive(Debug, Clone)]
pub struct FramedSpace {
    pub frame: Frame,
    pub space: EmbeddingSpace,
}

impl FramedSpace {
    pub fn new(frame: Frame, space: EmbeddingSpace) -> Self {
        FramedSpace { frame, space }
    }

    pub fn expect_frame(&self, expected: Frame) -> Result<&EmbeddingSpace> {
        if self.frame != expected {
            return Err(Error::FrameMismatch {
                expected: expected.as_str().to_string(),
                found: self.frame.as_str().to_string(),
            });
        }
        Ok(&self.space)
    }
}
