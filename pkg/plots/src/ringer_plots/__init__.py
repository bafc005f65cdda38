"""Figure generation from the simulator's CSV outputs: social-experience
time series per agent kind and per-norm adoption strip plots.
"""

from .io import InputError, read_metrics, read_norms
from .figures import plot_adoption, plot_experience

__all__ = ["InputError", "plot_adoption", "plot_experience",
           "read_metrics", "read_norms"]
