# run.py
from config import settings
from src import create_app

# Crear la aplicación usando la fábrica
app = create_app()

if __name__ == '__main__':
    print(f"🚀 Iniciando simulador en puerto {settings.PORT}")
    app.run(host='0.0.0.0', port=settings.PORT, debug=settings.FLASK_DEBUG, use_reloader=False)
