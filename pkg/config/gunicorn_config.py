# config/gunicorn_config.py
# Uso: gunicorn -c config/gunicorn_config.py run:app
import os

bind = f"0.0.0.0:{os.environ.get('PORT', 8000)}"
workers = int(os.environ.get('WEB_CONCURRENCY', 2))

# Simulaciones grandes: hasta 5 minutos por petición
timeout = int(os.environ.get('GUNICORN_TIMEOUT', 300))
loglevel = os.environ.get('LOG_LEVEL', 'info').lower()
accesslog = '-'
