# config/settings.py
# Parámetros del simulador. Todo se puede sobreescribir desde el entorno (.env)
import math
import os

from dotenv import load_dotenv

load_dotenv()


def _flag(name, default='False'):
    return os.environ.get(name, default).lower() in ('1', 'true', 'yes')


def _optional_int(name):
    raw = os.environ.get(name)
    return int(raw) if raw not in (None, '') else None


# ==========================================
# ÁLGEBRA LINEAL F2
# ==========================================
FOUR_RUSSIANS = _flag('FOUR_RUSSIANS')
FOUR_RUSSIANS_CHUNK = int(os.environ.get('FOUR_RUSSIANS_CHUNK', 8))

# Por debajo de este número de filas conjugate_many usa el régimen denso
CONJUGATE_DENSE_ROWS = int(os.environ.get('CONJUGATE_DENSE_ROWS', 64))

# ==========================================
# SEPARADORES Y DESCOMPOSICIONES
# ==========================================
SEPARATOR_ALPHA = float(os.environ.get('SEPARATOR_ALPHA', 2 / 3))
SEPARATOR_BETA = float(os.environ.get('SEPARATOR_BETA', 2 * math.sqrt(2)))

# ==========================================
# SIMULACIÓN
# ==========================================
DEFAULT_SEED = _optional_int('DEFAULT_SEED')
ORACLE_MAX_QUBITS = int(os.environ.get('ORACLE_MAX_QUBITS', 14))
GRID_BASE_SIDE = int(os.environ.get('GRID_BASE_SIDE', 4))
BENCH_TRIALS = int(os.environ.get('BENCH_TRIALS', 7))

# ==========================================
# SERVIDOR Y LOGS
# ==========================================
LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO').upper()
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
PORT = int(os.environ.get('PORT', 8000))
FLASK_DEBUG = _flag('FLASK_DEBUG')
