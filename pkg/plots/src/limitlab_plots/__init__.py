"""Figure rendering for limitlab artifacts; see limitlab_plots.render."""

from .render import ArtifactError, FigureSpec, read_artifact, render

__all__ = ["ArtifactError", "FigureSpec", "read_artifact", "render"]
