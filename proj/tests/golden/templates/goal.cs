using UnityEngine;

// Finish marker; reaching it is resolved by the state owner's rules.
public class ExitGoal : MonoBehaviour
{

    void OnCollisionEnter(Collision collision)
    {
        RuleBook.Instance.ReportContact(gameObject, collision.gameObject, false);
    }

    void OnTriggerEnter(Collider other)
    {
        RuleBook.Instance.ReportContact(gameObject, other.gameObject, true);
    }
}
