"""Gross-value-added spectrum analytics.

Value-added shares (GVA / OBP), equilibrium baselines over the scree-ordered
GVA spectrum, the log-ratio irregularity coefficient and bubble flagging.
"""

from .accounts import (
    AccountsPanel,
    IndustryId,
    IndustryRecord,
    Violation,
    parse_accounts_csv,
    panel_to_csv,
    reference_table1,
    validate_panel,
)
from .baseline import (
    EquilibriumBaseline,
    RegressionModel,
    ScreeOrdering,
    fit_equilibrium_baseline,
    fit_ols,
    predict,
    scree_order,
)
from .indicators import GVAShareTransformer, ShareEntry, SpectrumSummary, gva_share, share_spectrum, summarize_spectrum
from .irregularity import (
    BubbleDetector,
    DetectionConfig,
    IrregularityEntry,
    detect_bubbles,
    growth_extremes,
    irregularity,
)
from .report import (
    AnalysisReport,
    analyze_panel,
    emit_report,
    parse_report,
    render_irregularity_svg,
    render_scree_svg,
    render_share_svg,
)

__version__ = "0.1.0"
