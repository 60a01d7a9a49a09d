from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # --- Group engine ---
    max_group_order: int = 4096          # dense mul table bound
    exhaustive_pair_limit: int = 4096    # above this order the O(n^2) oracle cross-check is skipped

    # --- Analysis defaults ---
    default_prime: int = 2
    strict: bool = False                 # condition violations -> exit code 3

    # --- Export ---
    export_dir: str = "exports"
    export_format: str = "structured"    # structured | text | dot

    log_level: str = "INFO"

    model_config = SettingsConfigDict(env_file=".env", env_prefix="FPS_", case_sensitive=False, extra="ignore")


settings = Settings()
