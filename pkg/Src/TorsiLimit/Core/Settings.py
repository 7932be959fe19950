# File: Settings.py
# Path: /root/pkg/Src/TorsiLimit/Core/Settings.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 18:45PM

"""Study configuration: CLI flags over TORSILIMIT_* environment over a YAML file."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Type

import psutil
import yaml
from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic.fields import FieldInfo
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from TorsiLimit.ErrorHandling import ConfigurationError, report_configuration_error

logger = logging.getLogger(__name__)


class YamlConfigSource(PydanticBaseSettingsSource):
    """Settings values from the YAML study file named by `config_file`."""

    def __init__(self, settings_cls: Type[BaseSettings], config_file: Optional[Path]) -> None:
        super().__init__(settings_cls)
        self.config_file = config_file
        self._data = self._load()

    def _load(self) -> Dict[str, Any]:
        if self.config_file is None:
            return {}
        path = Path(self.config_file)
        if not path.is_file():
            raise ConfigurationError(f"config file not found: {path}")
        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            report_configuration_error(e, config_file=path)
            raise ConfigurationError(f"{path.name}: invalid YAML ({e})") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path.name}: top level must be a mapping")
        base = path.parent
        # relative input paths resolve against the config file's directory
        for key in ("case", "shafts", "materials", "out"):
            if isinstance(data.get(key), str) and not Path(data[key]).is_absolute():
                data[key] = str(base / data[key])
        return {k.replace("-", "_"): v for k, v in data.items()}

    def get_field_value(self, field: FieldInfo, field_name: str) -> Tuple[Any, str, bool]:
        return self._data.get(field_name), field_name, False

    def __call__(self) -> Dict[str, Any]:
        return {k: v for k, v in self._data.items() if k in self.settings_cls.model_fields}


class StudyConfig(BaseSettings):
    """Parameters of a torsional-limit study."""

    model_config = SettingsConfigDict(
        env_prefix="TORSILIMIT_",
        case_sensitive=False,
        validate_default=True,
        extra="ignore",
    )

    config_file: Optional[Path] = Field(default=None, description="YAML study file")
    case: Optional[Path] = Field(default=None, description="Network case JSON")
    shafts: Optional[Path] = Field(default=None, description="Shaft file or directory")
    materials: Optional[Path] = Field(default=None, description="Material file or directory")
    out: Path = Field(default=Path("torsilimit-out"), description="Output directory")

    cap_fraction: float = Field(default=0.20, gt=0, le=1)
    delta_f_max_hz: float = Field(default=1.5, gt=0)
    beta: float = Field(default=0.05, gt=0, lt=1)
    perturbation_mw: Optional[float] = Field(default=None, gt=0)
    threshold_mw: float = Field(default=0.0, ge=0)
    compute_fraction: float = Field(default=0.25, gt=0, le=1)
    weights: Optional[Dict[int, float]] = Field(default=None, description="LP weight per bus")
    exclude_buses: List[int] = Field(default_factory=list)

    grid_step_hz: float = Field(default=0.05, gt=0)
    refine_step_hz: float = Field(default=0.005, gt=0)
    refine_span_hz: float = Field(default=0.05, ge=0)
    f_sync_hz: float = Field(default=60.0, gt=0)

    simulation_dt_s: Optional[float] = Field(default=None, gt=0)
    settle_s: float = Field(default=5.0, ge=0)
    amplitude_window_s: float = Field(default=10.0, gt=0)

    tolerance_pf: float = Field(default=1e-8, gt=0)
    max_iter_pf: int = Field(default=30, ge=1)

    threads: Optional[int] = Field(default=None, ge=1)
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: Optional[Path] = Field(default=None, description="Log file path")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"Invalid log level: {v}")
        return v_upper

    @model_validator(mode="after")
    def check_grid(self) -> "StudyConfig":
        if self.refine_step_hz > self.grid_step_hz:
            raise ValueError("refine_step_hz must not exceed grid_step_hz")
        return self

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        """CLI values, then environment, then the YAML study file."""
        _ = (dotenv_settings, file_secret_settings)
        config_file = getattr(init_settings, "init_kwargs", {}).get("config_file")
        return (init_settings, env_settings, YamlConfigSource(settings_cls, config_file))

    @classmethod
    def load(
        cls, config_path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None
    ) -> "StudyConfig":
        """Build the configuration; None-valued overrides are ignored.

        Raises:
            ConfigurationError: unreadable YAML or out-of-range values
        """
        values = {k: v for k, v in (overrides or {}).items() if v is not None}
        if config_path is not None:
            values["config_file"] = Path(config_path)
        try:
            config = cls(**values)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(p) for p in first["loc"])
            report_configuration_error(e, config_file=config_path, config_section=location)
            raise ConfigurationError(f"invalid setting {location}: {first['msg']}") from e
        logger.debug(f"Loaded study configuration (out={config.out})")
        return config

    def require(self, *names: str) -> None:
        """Ensure the named input paths are configured and exist."""
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigurationError(f"--{name} is required for this command")
            if not Path(value).exists():
                raise ConfigurationError(f"{name} path not found: {value}")

    def worker_count(self) -> int:
        """Thread budget: `threads` if set, else the logical CPU count."""
        if self.threads:
            return self.threads
        return max(1, psutil.cpu_count(logical=True) or 1)
