from pathlib import Path
palindist_abspath = Path(__file__).parent.resolve()

LOGGER_NAME = 'palindist_log'

VALID_BOUND_IDS = ['lemma21', 'lemma22', 'lemma31', 'lemma32', 'prop41', 'prop42', 'cor45', 'cor46']

# --- Patch logging to add info_detailed method
from palindist.utils.custom_logging import patch_info_detailed
patch_info_detailed()
