"""ARIMA-based unsupervised fraud detection on daily transaction counts."""

from ._fraudts import (
    AdfResult,
    ArimaModel,
    ArimaOrder,
    BaselineFlagSet,
    DetectionOutcome,
    ForecastPoint,
    FraudtsError,
    LjungBoxResult,
    acf,
    adf_test,
    boxplot_detect,
    detect,
    fit,
    iforest_detect,
    kmeans_detect,
    ljung_box,
    lof_detect,
    metrics,
    pacf,
    rolling_forecast,
    simulate,
    suggest_orders,
)

__all__ = [
    "AdfResult",
    "ArimaModel",
    "ArimaOrder",
    "BaselineFlagSet",
    "DetectionOutcome",
    "ForecastPoint",
    "FraudtsError",
    "LjungBoxResult",
    "acf",
    "adf_test",
    "boxplot_detect",
    "detect",
    "fit",
    "iforest_detect",
    "kmeans_detect",
    "ljung_box",
    "lof_detect",
    "metrics",
    "pacf",
    "rolling_forecast",
    "simulate",
    "suggest_orders",
]
