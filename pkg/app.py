from flask import Flask, jsonify, request
from flask_cors import CORS
import sys
import logging

from airdrop_svc import config


def configure_logging():
    logging.basicConfig(stream=sys.stdout, level=config.log_level(), format='%(asctime)s - %(levelname)s - %(message)s')

# Configure logging to output to sys.stdout
configure_logging()

from airdrop_svc.cost_model.calibration import default_table
from airdrop_svc.cost_model.gas_model import load_schedule
from airdrop_svc.cost_model.scenario_runner import enumerate_scenarios, omisego_estimate
from airdrop_svc.errors import AirdropError
from airdrop_svc.routes import airdrop_bp

app = Flask(__name__)
CORS(app)

from flask_caching import Cache
cache = Cache(app, config={'CACHE_TYPE': 'simple'})

# Register cost model blueprint
app.register_blueprint(airdrop_bp)


@app.route('/')
def index():
    """
    Service description and endpoint list
    """
    return jsonify({
        "message": "Airdrop cost model API is working!",
        "endpoints": {
            "POST /api/cost": "Itemized gas cost (JSON body with 'label' and 'recipients')",
            "POST /api/feasibility": "Block fill grades a strategy fits",
            "GET /api/scenarios": "The 35 benchmark scenarios",
            "GET /api/schedule": "Active fee schedule",
            "GET /api/omisego": "OmiseGO airdrop cross-check (optional 'usd_per_gas' query param)",
            "POST /api/merkle/verify": "Verify a Merkle proof",
            "POST /api/merkle/claim-gas": "Claim gas against a pooled distribution",
            "POST /api/fiat": "USD cost at a price point"
        },
        "status": "ok"
    }), 200


@app.errorhandler(404)
def page_not_found(error):
    return jsonify({"error": f"Unknown endpoint {request.path}", "success": False}), 404


@app.route('/api/scenarios', methods=['GET'])
@cache.cached(timeout=3600)
def scenarios():
    return jsonify({
        "scenarios": [
            {"label": s.label, "role": s.role.value, "descriptor": s.descriptor.model_dump(mode='json')}
            for s in enumerate_scenarios()
        ],
        "success": True
    }), 200


@app.route('/api/schedule', methods=['GET'])
def schedule():
    try:
        return jsonify({"schedule": load_schedule().model_dump(), "success": True}), 200
    except AirdropError as e:
        return jsonify({"error": str(e), "success": False}), 500


@app.route('/api/omisego', methods=['GET'])
@cache.cached(timeout=300, query_string=True)
def omisego():
    """
    Query params:
        usd_per_gas: Conversion rate (default 3.0002e-6)
    """
    try:
        rate = request.args.get('usd_per_gas', '3.0002E-6')
        active = load_schedule()
        estimate = omisego_estimate(active, rate, table=default_table(active))
        return jsonify({**estimate.model_dump(mode='json'), "success": True}), 200
    except AirdropError as e:
        return jsonify({"error": str(e), "success": False}), 400
    except Exception as e:
        logging.error(f"Error in omisego estimate: {str(e)}")
        return jsonify({"error": str(e), "success": False}), 500


if __name__ == '__main__':
    import os
    if os.getenv('FLASK_ENV') == 'production':
        app.run(debug=False, host='0.0.0.0', port=config.api_port())
    else:
        app.run(debug=True, host='0.0.0.0', port=config.api_port())
