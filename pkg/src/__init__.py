import logging
from flask import Flask
from flask_cors import CORS
from dotenv import load_dotenv

from config import settings

# Configurar Logging básico
logging.basicConfig(level=settings.LOG_LEVEL, format=settings.LOG_FORMAT)
logger = logging.getLogger(__name__)

# Cargar variables de entorno (.env)
load_dotenv()

# ==========================================
# 1. INSTANCIAS GLOBALES (SINGLETONS)
# ==========================================
# Importable desde las rutas: 'import src; src.simulator'
simulator = None


def create_app():
    """
    Fábrica de Aplicación: crea la instancia de Flask, inicia el simulador
    y registra las rutas.
    """
    app = Flask(__name__)
    CORS(app)

    # ==========================================
    # 2. INICIALIZACIÓN DEL SIMULADOR
    # ==========================================
    global simulator
    is_ready = False

    logger.info("⚙️ Inicializando simulador de estados de grafo...")
    try:
        # Importamos aquí para evitar ciclos
        from src.services.simulator_service import SimulatorService
        simulator = SimulatorService()
        is_ready = True
        logger.info("✅ Simulador iniciado")
    except Exception as e:
        from src.services.simulator_service import SimulatorStub
        logger.error(f"❌ Fallo al iniciar el simulador: {e}")
        logger.warning("⚠️ La API responderá con error hasta reiniciar el servicio")
        simulator = SimulatorStub()

    # ==========================================
    # 3. REGISTRO DE BLUEPRINTS (RUTAS)
    # ==========================================
    try:
        from src.routes.api import bp as api_bp
        app.register_blueprint(api_bp)
        logger.info("✅ Blueprints registrados (API)")
    except Exception as e:
        logger.error(f"❌ Error registrando rutas: {e}")

    # ==========================================
    # 4. RUTAS DE SISTEMA (Healthcheck)
    # ==========================================
    @app.route('/health')
    def health_check():
        return {
            "status": "Simulador Online" if is_ready else "Simulador no disponible",
            "services": {
                "simulator": "OK" if is_ready else "ERROR (Stub)",
                "four_russians": settings.FOUR_RUSSIANS,
                "oracle_max_qubits": settings.ORACLE_MAX_QUBITS,
            }
        }

    return app
