using UnityEngine;

// Player movement: WASD / arrow keys steer, Space jumps while grounded.
public class HeroMovement : MonoBehaviour
{
    public float speed = 4.5f;
    public float jumpForce = 5f;

    private Rigidbody body;
    private bool grounded;

    void Awake()
    {
        body = GetComponent<Rigidbody>();
    }

    void Update()
    {
        if (body != null && grounded && Input.GetKeyDown(KeyCode.Space))
        {
            body.AddForce(Vector3.up * jumpForce, ForceMode.Impulse);
            grounded = false;
        }
    }

    void FixedUpdate()
    {
        Vector3 input = new Vector3(Input.GetAxis("Horizontal"), 0f, Input.GetAxis("Vertical"));
        Move(input);
    }

    public void Move(Vector3 direction)
    {
        if (direction.sqrMagnitude > 1f)
        {
            direction.Normalize();
        }
        if (body != null && !body.isKinematic)
        {
            body.AddForce(direction * speed, ForceMode.Acceleration);
        }
        else
        {
            transform.Translate(direction * speed * Time.fixedDeltaTime, Space.World);
        }
    }

    void OnCollisionEnter(Collision collision)
    {
        if (collision.contactCount > 0 && collision.GetContact(0).normal.y > 0.5f)
        {
            grounded = true;
        }
        RuleBook.Instance.ReportContact(gameObject, collision.gameObject, false);
    }

    void OnTriggerEnter(Collider other)
    {
        RuleBook.Instance.ReportContact(gameObject, other.gameObject, true);
    }
}
